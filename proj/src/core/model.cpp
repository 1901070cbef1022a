#include "model.hpp"

#include <cmath>
#include <stdexcept>

namespace evoscale {

double BirthFamily::operator()(const Trait& x) const {
    double v = intercept;
    if (slope.size() > 0) v += slope.dot(x);
    if (v <= 0.0) throw std::domain_error("birth rate nonpositive at this trait");
    return v;
}

Eigen::VectorXd BirthFamily::gradient(const Trait& x) const {
    if (slope.size() > 0) return slope;
    return Eigen::VectorXd::Zero(x.size());
}

double CompetitionFamily::operator()(const Trait& x, const Trait& y) const {
    switch (kind) {
        case Kind::constant:
            return c0;
        case Kind::gaussian_diff: {
            const double q = (x - y).squaredNorm();
            return c0 * std::exp(-q / (2.0 * width * width));
        }
        case Kind::log_affine:
            return c0 * std::exp(g1.dot(x) + g2.dot(y));
    }
    return c0;
}

Eigen::VectorXd CompetitionFamily::grad1(const Trait& x, const Trait& y) const {
    switch (kind) {
        case Kind::constant:
            return Eigen::VectorXd::Zero(x.size());
        case Kind::gaussian_diff:
            return (*this)(x, y) * (-(x - y) / (width * width));
        case Kind::log_affine:
            return (*this)(x, y) * g1;
    }
    return Eigen::VectorXd::Zero(x.size());
}

Eigen::VectorXd CompetitionFamily::grad2(const Trait& x, const Trait& y) const {
    switch (kind) {
        case Kind::constant:
            return Eigen::VectorXd::Zero(x.size());
        case Kind::gaussian_diff:
            return (*this)(x, y) * ((x - y) / (width * width));
        case Kind::log_affine:
            return (*this)(x, y) * g2;
    }
    return Eigen::VectorXd::Zero(x.size());
}

Eigen::VectorXd GaussianKernel::sample(Rng& rng) const {
    Eigen::VectorXd h(sd.size());
    for (Eigen::Index i = 0; i < sd.size(); ++i) h[i] = rng.normal() * sd[i];
    if (mean.size() > 0) h += mean;
    return h;
}

double GaussianKernel::density(const Eigen::VectorXd& h) const {
    double logp = 0.0;
    for (Eigen::Index i = 0; i < sd.size(); ++i) {
        const double z = (h[i] - (mean.size() > 0 ? mean[i] : 0.0)) / sd[i];
        logp += -0.5 * z * z - std::log(sd[i]) - 0.5 * std::log(2.0 * M_PI);
    }
    return std::exp(logp);
}

Eigen::MatrixXd GaussianKernel::covariance() const {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(sd.size(), sd.size());
    for (Eigen::Index i = 0; i < sd.size(); ++i) m(i, i) = sd[i] * sd[i];
    return m;
}

Eigen::MatrixXd GaussianKernel::sqrt_covariance() const {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(sd.size(), sd.size());
    for (Eigen::Index i = 0; i < sd.size(); ++i) m(i, i) = sd[i];
    return m;
}

double Model::b(const Trait& x) const { return birth(x); }

double Model::c(const Trait& x, const Trait& y) const {
    const double v = competition(x, y);
    if (v <= 0.0) throw std::domain_error("competition rate nonpositive");
    return v;
}

Trait Model::trait(double x0) const {
    Trait t(dim);
    t.setZero();
    t[0] = x0;
    return t;
}

Trait Model::trait(std::initializer_list<double> v) const {
    Trait t(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) t[i++] = x;
    return t;
}

}  // namespace evoscale
