#include "rulkit/metrics.hpp"

#include <cmath>

#include <json.hpp>

#include "rulkit/errors.hpp"
#include "rulkit/io_util.hpp"

namespace rulkit {

double mape(const Vec& actual, const Vec& predicted) {
    if (actual.size() != predicted.size() || actual.empty())
        throw Error("mape: series must be non-empty and of equal length");
    double s = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        if (actual[i] == 0.0) throw ZeroReference("mape: actual value is zero");
        s += std::fabs((actual[i] - predicted[i]) / actual[i]);
    }
    return 100.0 * s / static_cast<double>(actual.size());
}

double relative_accuracy(double true_rul, double est_rul) {
    if (!(true_rul > 0.0)) throw ZeroReference("relative_accuracy: true RUL must be positive");
    return 1.0 - std::fabs(true_rul - est_rul) / true_rul;
}

std::vector<AlphaLambdaRecord> alpha_lambda_sweep(const ForecasterFactory& factory,
                                                  const Vec& train_series,
                                                  const DegradationSeries& uut,
                                                  const SweepOptions& opt) {
    if (!uut.failure_cycle)
        throw Error("alpha_lambda_sweep: series '" + uut.battery_id + "' never reaches eta");
    const int failure = *uut.failure_cycle;
    const double alpha = 1.0 - opt.confidence;

    std::vector<AlphaLambdaRecord> records;
    records.reserve(opt.t_p.size());

    for (const int t_p : opt.t_p) {
        AlphaLambdaRecord rec;
        rec.t_p = t_p;
        rec.true_rul = failure - t_p;

        auto model = factory();
        const int lags = model->lags();
        rec.s_i = t_p - (lags - 3);

        // Not carried out: alignment impossible, start beyond the data,
        // or the unit has already failed by t_P.
        if (rec.s_i < lags || rec.s_i > static_cast<int>(uut.size()) || rec.true_rul <= 0) {
            rec.status = SweepStatus::Skipped;
            records.push_back(std::move(rec));
            continue;
        }

        model->fit(train_series);
        for (int i = 0; i < rec.s_i; ++i) model->observe(uut.hi[i]);

        ForecastPath path = model->forecast(opt.max_horizon);
        const auto direction = resolve_direction(uut.hi.front(), opt.eta);
        const RulEstimate rul = estimate_rul(path, opt.eta, alpha, direction);

        // Cycles are aligned back to the nominal t_P so every algorithm is
        // scored on the same clock regardless of its lag order.
        const int shift = rec.s_i - t_p;
        if (rul.point) rec.est_rul = *rul.point + shift;
        if (rul.lower) rec.lower = *rul.lower + shift;
        if (rul.upper) rec.upper = *rul.upper + shift;

        if (rec.est_rul) {
            rec.status = SweepStatus::Ok;
            rec.ra = relative_accuracy(rec.true_rul, *rec.est_rul);
            rec.in_goal =
                std::fabs(static_cast<double>(*rec.est_rul - rec.true_rul)) <=
                opt.alpha_goal * static_cast<double>(rec.true_rul);
        } else {
            rec.status = SweepStatus::Infeasible;
        }
        if (opt.keep_paths) rec.path = std::move(path);
        records.push_back(std::move(rec));
    }
    return records;
}

std::string alpha_lambda_to_json(const std::vector<AlphaLambdaRecord>& records) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : records) {
        nlohmann::json rec;
        rec["t_p"] = r.t_p;
        rec["s_i"] = r.s_i;
        rec["true_rul"] = r.true_rul;
        rec["est_rul"] = r.est_rul ? nlohmann::json(*r.est_rul) : nlohmann::json(nullptr);
        rec["lower"] = r.lower ? nlohmann::json(*r.lower) : nlohmann::json(nullptr);
        rec["upper"] = r.upper ? nlohmann::json(*r.upper) : nlohmann::json(nullptr);
        rec["ra"] = r.ra ? nlohmann::json(*r.ra) : nlohmann::json(nullptr);
        rec["in_goal"] = r.in_goal;
        rec["status"] = r.status == SweepStatus::Ok          ? "ok"
                        : r.status == SweepStatus::Infeasible ? "infeasible"
                                                              : "skipped";
        arr.push_back(std::move(rec));
    }
    return nlohmann::json{{"records", std::move(arr)}}.dump(2);
}

void write_alpha_lambda_csv(std::ostream& out, const std::vector<AlphaLambdaRecord>& records) {
    out << "t_p,s_i,true_rul,est_rul,lower,upper,ra,in_goal,status\n";
    for (const auto& r : records) {
        out << r.t_p << ',' << r.s_i << ',' << r.true_rul << ',';
        if (r.est_rul) out << *r.est_rul;
        out << ',';
        if (r.lower) out << *r.lower;
        out << ',';
        if (r.upper) out << *r.upper;
        out << ',';
        if (r.ra) out << fmt_g17(*r.ra);
        out << ',' << (r.in_goal ? 1 : 0) << ',';
        switch (r.status) {
            case SweepStatus::Ok: out << "ok"; break;
            case SweepStatus::Infeasible: out << "infeasible"; break;
            case SweepStatus::Skipped: out << "skipped"; break;
        }
        out << '\n';
    }
}

} // namespace rulkit
