#include "rulkit/evolve.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "rulkit/stats.hpp"

namespace rulkit {

namespace {

void require_finite(const Vec& x, double y) {
    for (double v : x)
        if (!std::isfinite(v)) throw Error("learn_step: non-finite input");
    if (!std::isfinite(y)) throw Error("learn_step: non-finite target");
}

Vec augmented(const Vec& x) {
    Vec xt(x.size() + 1);
    xt[0] = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i) xt[i + 1] = x[i];
    return xt;
}

FuzzyRule make_rule(const Vec& x, Vec theta, const EvolveConfig& cfg) {
    const std::size_t n = x.size();
    const double s2 = cfg.sigma_init * cfg.input_scale * cfg.input_scale;
    return FuzzyRule(x, Mat::identity(n, s2), std::move(theta), Mat::identity(n + 1, cfg.delta));
}

} // namespace

double compatibility_threshold(const EvolveConfig& cfg, int n_x) {
    return stats::chi_square_quantile(cfg.omega, n_x);
}

double membership_threshold(const EvolveConfig& cfg, int n_x) {
    return std::exp(-0.5 * compatibility_threshold(cfg, n_x));
}

void update_antecedent(FuzzyRule& rule, const Vec& x, double gamma, bool diagonal) {
    const double step = gamma / static_cast<double>(rule.support);
    const std::size_t n = x.size();

    Vec c = rule.center();
    for (std::size_t i = 0; i < n; ++i) c[i] += step * (x[i] - c[i]);

    Mat disp = rule.dispersion();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double scatter = (x[i] - c[i]) * (x[j] - c[j]);
            disp(i, j) = (1.0 - step) * disp(i, j) + step * scatter;
        }
    }
    if (diagonal) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) disp(i, j) = 0.0;
    }

    rule.set_center(std::move(c));
    rule.set_dispersion(std::move(disp));
    rule.support += 1;
}

void rls_update(FuzzyRule& rule, const Vec& x_tilde, double y, double weight) {
    if (weight <= 0.0) return;
    const Vec px = matvec(rule.rls_cov, x_tilde);
    const double denom = 1.0 / weight + dot(x_tilde, px);
    const std::size_t n = x_tilde.size();

    Vec gain(n);
    for (std::size_t i = 0; i < n; ++i) gain[i] = px[i] / denom;

    const double err = y - dot(x_tilde, rule.theta);
    for (std::size_t i = 0; i < n; ++i) rule.theta[i] += gain[i] * err;

    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) rule.rls_cov(i, j) -= gain[i] * px[j];
    symmetrize(rule.rls_cov);
}

LearnReport learn_step(TSModel& model, const Vec& x, double y, ErrorTracker& tracker) {
    require_finite(x, y);
    model.config.validate();

    if (model.empty()) {
        model.n_x = static_cast<int>(x.size());
        tracker.push(0.0);
        model.rules.push_back(make_rule(x, Vec(x.size() + 1, 0.0), model.config));
        rls_update(model.rules.back(), augmented(x), y, 1.0);
        return {LearnAction::Created, 0, 0.0};
    }
    if (static_cast<int>(x.size()) != model.n_x) throw Error("learn_step: input dimension mismatch");

    const double residual = y - infer(model, x);
    tracker.push(residual);

    std::size_t best = 0;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < model.rules.size(); ++i) {
        const double d2 = mahalanobis_sq(model.rules[i], x);
        if (d2 < best_d2) {
            best_d2 = d2;
            best = i;
        }
    }

    if (best_d2 > compatibility_threshold(model.config, model.n_x)) {
        // No compatible rule: spawn one at x, inheriting the local linear
        // trend so long-horizon slopes survive rule birth.
        const Vec h = activations(model, x);
        model.rules.push_back(make_rule(x, effective_coefficients(model, h), model.config));
        const Vec h2 = activations(model, x);
        rls_update(model.rules.back(), augmented(x), y, h2.back());
        return {LearnAction::Created, model.rules.size() - 1, residual};
    }

    const Vec h = activations(model, x);
    const double weight = h[best];
    update_antecedent(model.rules[best], x, model.config.gamma, model.config.diagonal_dispersion);
    rls_update(model.rules[best], augmented(x), y, weight);
    return {LearnAction::Updated, best, residual};
}

namespace {

using nlohmann::json;

json mat_to_json(const Mat& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Mat mat_from_json(const json& j) {
    const std::size_t r = j.size();
    const std::size_t c = r > 0 ? j[0].size() : 0;
    Mat m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t k = 0; k < c; ++k) m(i, k) = j[i][k].get<double>();
    return m;
}

} // namespace

std::string model_to_json(const TSModel& model, const ErrorTracker& tracker) {
    json doc;
    doc["schema"] = 1;
    doc["n_x"] = model.n_x;
    doc["config"] = {{"omega", model.config.omega},
                     {"tau", model.config.tau},
                     {"gamma", model.config.gamma},
                     {"delta", model.config.delta},
                     {"sigma_init", model.config.sigma_init},
                     {"input_scale", model.config.input_scale},
                     {"diagonal_dispersion", model.config.diagonal_dispersion}};
    json rules = json::array();
    for (const auto& r : model.rules) {
        rules.push_back({{"center", r.center()},
                         {"dispersion", mat_to_json(r.dispersion())},
                         {"theta", r.theta},
                         {"rls_cov", mat_to_json(r.rls_cov)},
                         {"support", r.support}});
    }
    doc["rules"] = std::move(rules);
    doc["tracker"] = {{"n", tracker.count()}, {"mean", tracker.mean()}, {"m2", tracker.sum_squares()}};
    return doc.dump(2);
}

void model_from_json(const std::string& text, TSModel& model, ErrorTracker& tracker) {
    const json doc = json::parse(text);
    if (doc.at("schema").get<int>() != 1) throw SchemaError("model snapshot: unsupported schema version");

    TSModel m;
    m.n_x = doc.at("n_x").get<int>();
    const json& c = doc.at("config");
    m.config.omega = c.at("omega").get<double>();
    m.config.tau = c.at("tau").get<int>();
    m.config.gamma = c.at("gamma").get<double>();
    m.config.delta = c.at("delta").get<double>();
    m.config.sigma_init = c.at("sigma_init").get<double>();
    m.config.input_scale = c.at("input_scale").get<double>();
    m.config.diagonal_dispersion = c.at("diagonal_dispersion").get<bool>();

    for (const json& jr : doc.at("rules")) {
        FuzzyRule rule(jr.at("center").get<Vec>(), mat_from_json(jr.at("dispersion")),
                       jr.at("theta").get<Vec>(), mat_from_json(jr.at("rls_cov")));
        rule.support = jr.at("support").get<long long>();
        m.rules.push_back(std::move(rule));
    }

    const json& t = doc.at("tracker");
    tracker.restore(t.at("n").get<long long>(), t.at("mean").get<double>(), t.at("m2").get<double>());
    model = std::move(m);
}

void save_model(const std::filesystem::path& path, const TSModel& model, const ErrorTracker& tracker) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open for writing: " + path.string());
    out << model_to_json(model, tracker) << '\n';
}

void load_model(const std::filesystem::path& path, TSModel& model, ErrorTracker& tracker) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open for reading: " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    model_from_json(text, model, tracker);
}

} // namespace rulkit
