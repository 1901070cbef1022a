#include "config.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace evoscale {

namespace {

using nlohmann::json;

Eigen::VectorXd vector_field(const json& j, const std::string& what, int dim) {
    Eigen::VectorXd v(dim);
    if (j.is_number()) {
        v.setConstant(j.get<double>());
        return v;
    }
    if (!j.is_array() || static_cast<int>(j.size()) != dim)
        throw ConfigError("config: " + what + " must be a number or an array of length " +
                          std::to_string(dim));
    for (int i = 0; i < dim; ++i) v[i] = j[static_cast<std::size_t>(i)].get<double>();
    return v;
}

Model model_from_json(const json& j) {
    Model m;
    m.dim = j.value("trait_dim", 1);
    if (m.dim < 1) throw ConfigError("config: trait_dim must be >= 1");

    const json& birth = j.at("birth");
    const std::string bfam = birth.value("family", "affine");
    if (bfam != "affine") throw ConfigError("config: unknown birth family '" + bfam + "'");
    m.birth.intercept = birth.at("intercept").get<double>();
    if (birth.contains("slope"))
        m.birth.slope = vector_field(birth.at("slope"), "birth.slope", m.dim);

    const json& comp = j.at("competition");
    const std::string cfam = comp.value("family", "constant");
    if (cfam == "constant") {
        m.competition.kind = CompetitionFamily::Kind::constant;
        m.competition.c0 = comp.at("value").get<double>();
    } else if (cfam == "gaussian_diff") {
        m.competition.kind = CompetitionFamily::Kind::gaussian_diff;
        m.competition.c0 = comp.value("scale", 1.0);
        m.competition.width = comp.at("width").get<double>();
        if (m.competition.width <= 0.0) throw ConfigError("config: width must be positive");
    } else if (cfam == "log_affine") {
        m.competition.kind = CompetitionFamily::Kind::log_affine;
        m.competition.c0 = comp.value("scale", 1.0);
        m.competition.g1 = vector_field(comp.at("g1"), "competition.g1", m.dim);
        m.competition.g2 = vector_field(comp.at("g2"), "competition.g2", m.dim);
    } else {
        throw ConfigError("config: unknown competition family '" + cfam + "'");
    }
    if (m.competition.c0 <= 0.0) throw ConfigError("config: competition scale must be positive");

    m.mu_const = j.at("mutation_prob").get<double>();
    if (m.mu_const < 0.0 || m.mu_const > 1.0)
        throw ConfigError("config: mutation_prob must lie in [0,1]");

    const json& kernel = j.at("kernel");
    m.kernel.sd = vector_field(kernel.at("sd"), "kernel.sd", m.dim);
    for (int i = 0; i < m.dim; ++i)
        if (m.kernel.sd[i] <= 0.0) throw ConfigError("config: kernel sd must be positive");
    if (kernel.contains("mean"))
        m.kernel.mean = vector_field(kernel.at("mean"), "kernel.mean", m.dim);
    else
        m.kernel.mean = Eigen::VectorXd::Zero(m.dim);

    m.natural_death = j.value("natural_death", 0.0);
    if (m.natural_death < 0.0) throw ConfigError("config: natural_death must be >= 0");
    return m;
}

ExperimentConfig config_from_json(const json& j, std::string text) {
    if (!j.contains("schema_version") || j.at("schema_version").get<int>() != 1)
        throw ConfigError("config: schema_version must be 1");
    ExperimentConfig cfg;
    cfg.json_text = std::move(text);
    cfg.model = model_from_json(j.at("model"));

    if (j.contains("scale")) {
        const json& s = j.at("scale");
        if (s.contains("gamma")) cfg.scale.gamma = s.at("gamma").get<std::vector<double>>();
        if (s.contains("epsilon"))
            cfg.scale.epsilon = s.at("epsilon").get<std::vector<double>>();
    }
    for (double g : cfg.scale.gamma)
        if (g <= 0.0 || g > 1.0) throw ConfigError("config: gamma values must be in (0,1]");
    for (double e : cfg.scale.epsilon)
        if (e <= 0.0) throw ConfigError("config: epsilon values must be positive");

    if (j.contains("solver")) {
        const json& s = j.at("solver");
        cfg.solver.n_max = s.value("n_max", 0);
        cfg.solver.residual_tol = s.value("residual_tol", 1e-10);
        cfg.solver.k_max = s.value("k_max", 10000);
        cfg.solver.tail_tol = s.value("tail_tol", 1e-12);
        cfg.solver.sensitivity = s.value("sensitivity", true);
    }

    const json& r = j.at("run");
    cfg.run.replicates = r.value("replicates", 1000L);
    cfg.run.horizon = r.value("horizon", 10.0);
    if (!r.contains("seed")) throw ConfigError("config: run.seed is mandatory");
    cfg.run.seed = r.at("seed").get<uint64_t>();
    cfg.run.seed_set = true;
    if (r.contains("initial_trait"))
        cfg.run.initial_trait = r.at("initial_trait").get<std::vector<double>>();
    if (static_cast<int>(cfg.run.initial_trait.size()) != cfg.model.dim)
        throw ConfigError("config: initial_trait dimension mismatch");
    cfg.run.jobs = r.value("jobs", 1);
    cfg.run.event_cap = r.value("event_cap", 1000000000L);
    if (cfg.run.jobs < 1 || cfg.run.replicates < 1 || cfg.run.horizon <= 0.0)
        throw ConfigError("config: run block values out of range");
    return cfg;
}

}  // namespace

Trait ExperimentConfig::initial_trait() const {
    Trait t(model.dim);
    for (int i = 0; i < model.dim; ++i) t[i] = run.initial_trait[static_cast<std::size_t>(i)];
    return t;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_string(ss.str());
}

ExperimentConfig ExperimentConfig::from_string(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        // e.byte carries the offset; surface it for position-annotated errors
        throw ConfigError(std::string("config: ") + e.what());
    }
    try {
        return config_from_json(j, json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

std::string ExperimentConfig::apply_override(const std::string& json_text,
                                             const std::string& expr) {
    const std::size_t eq = expr.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ConfigError("override must look like path.to.key=value: " + expr);
    const std::string path = expr.substr(0, eq);
    const std::string value_text = expr.substr(eq + 1);
    json value;
    try {
        value = json::parse(value_text);
    } catch (const json::parse_error&) {
        value = value_text;  // plain string
    }
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    json* node = &j;
    std::size_t start = 0;
    for (;;) {
        const std::size_t dot = path.find('.', start);
        const std::string key = path.substr(start, dot == std::string::npos ? dot : dot - start);
        if (key.empty()) throw ConfigError("override has an empty path segment: " + expr);
        if (dot == std::string::npos) {
            (*node)[key] = value;
            break;
        }
        node = &(*node)[key];
        start = dot + 1;
    }
    return j.dump(2);
}

}  // namespace evoscale
