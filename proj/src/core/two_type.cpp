#include "two_type.hpp"

#include <array>
#include <stdexcept>
#include <vector>

#include "parallel.hpp"

namespace evoscale {

TwoTypeParams TwoTypeParams::from_base(double b, double c, double d,
                                       const SelectionCoefficients& s) {
    if (b <= 0.0 || c <= 0.0 || d < 0.0)
        throw std::invalid_argument("TwoTypeParams: need b > 0, c > 0, d >= 0");
    TwoTypeParams p;
    p.b1 = b;
    p.b2 = b + s.lambda;
    p.c11 = c;
    p.c12 = c + s.alpha - s.epsilon;
    p.c21 = c - s.delta - s.epsilon;
    p.c22 = c - s.delta + s.alpha;
    p.d1 = d;
    p.d2 = d - s.sigma;
    if (p.b1 <= 0.0 || p.b2 <= 0.0 || p.c11 <= 0.0 || p.c12 <= 0.0 || p.c21 <= 0.0 ||
        p.c22 <= 0.0)
        throw std::invalid_argument("TwoTypeParams: selection coefficients too large");
    return p;
}

TwoTypeRates two_type_rates(long n, long m, const TwoTypeParams& p) {
    if (n < 0 || m < 0 || (n == 0 && m == 0))
        throw std::invalid_argument("two_type_rates: invalid state");
    TwoTypeRates r;
    const double dn = static_cast<double>(n);
    const double dm = static_cast<double>(m);
    r.birth1 = p.b1 * dn;
    r.birth2 = p.b2 * dm;
    r.death1 = dn * (p.c11 * (dn - 1.0) + p.c12 * dm + p.d1);
    r.death2 = dm * (p.c21 * dn + p.c22 * (dm - 1.0) + p.d2);
    if (r.death1 < 0.0 || r.death2 < 0.0)
        throw std::domain_error("two_type_rates: negative rate at this state");
    return r;
}

TwoTypeOutcome two_type_run(long n0, long m0, const TwoTypeParams& p, Rng& rng) {
    if (n0 < 1 || m0 < 1) throw std::invalid_argument("two_type_run: need n0, m0 >= 1");
    long n = n0, m = m0;
    TwoTypeOutcome out;
    double t = 0.0;
    while (n > 0 && m > 0) {
        const TwoTypeRates r = two_type_rates(n, m, p);
        const double total = r.total();
        t += rng.exponential(total);
        const std::array<double, 4> rates{r.birth1, r.birth2, r.death1, r.death2};
        switch (rng.categorical(rates, total)) {
            case 0: ++n; break;
            case 1: ++m; break;
            case 2: --n; break;
            default: --m; break;
        }
        ++out.jump_count;
    }
    out.mutant_fixed = (n == 0);
    out.fixation_time = t;
    out.final_size = n + m;
    return out;
}

McEstimate mc_fixation(const TwoTypeParams& p, long n, long m, long replicates,
                       uint64_t seed, int jobs) {
    if (replicates < 1) throw std::invalid_argument("mc_fixation: replicates < 1");
    std::vector<unsigned char> fixed(static_cast<std::size_t>(replicates));
    parallel_for(static_cast<std::size_t>(replicates), jobs, [&](std::size_t r) {
        Rng rng(seed, static_cast<uint64_t>(r));
        fixed[r] = two_type_run(n, m, p, rng).mutant_fixed ? 1 : 0;
    });
    long successes = 0;
    for (auto f : fixed) successes += f;
    return binomial_estimate(successes, replicates);
}

}  // namespace evoscale
