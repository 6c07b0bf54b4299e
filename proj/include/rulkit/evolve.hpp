#pragma once

#include <cstddef>
#include <filesystem>
#include <string>

#include "rulkit/error_tracker.hpp"
#include "rulkit/ts_model.hpp"

namespace rulkit {

enum class LearnAction { Created, Updated };

struct LearnReport {
    LearnAction action;
    std::size_t rule_index;
    double residual; // y - prediction, taken before the update
};

/// Chi-square threshold on squared Mahalanobis distance at level omega;
/// a sample farther than this from every rule center spawns a new rule.
double compatibility_threshold(const EvolveConfig& cfg, int n_x);

/// Same threshold expressed as a minimum membership value.
double membership_threshold(const EvolveConfig& cfg, int n_x);

/// One streaming learning step. The pre-update residual is pushed into the
/// tracker, then the sample either spawns a rule (no compatible antecedent)
/// or updates the best-matching rule's antecedent and consequent. The very
/// first sample bootstraps rule 1 unconditionally with residual 0.
LearnReport learn_step(TSModel& model, const Vec& x, double y, ErrorTracker& tracker);

/// Exponentially-smoothed center/dispersion update with step gamma/support;
/// increments the support count.
void update_antecedent(FuzzyRule& rule, const Vec& x, double gamma, bool diagonal = false);

/// Weighted recursive least squares on one rule's consequent.
/// weight = 0 leaves the rule untouched.
void rls_update(FuzzyRule& rule, const Vec& x_tilde, double y, double weight);

/// Versioned JSON snapshot of a model plus its residual tracker.
/// Doubles survive the round trip losslessly.
std::string model_to_json(const TSModel& model, const ErrorTracker& tracker);
void model_from_json(const std::string& text, TSModel& model, ErrorTracker& tracker);

void save_model(const std::filesystem::path& path, const TSModel& model, const ErrorTracker& tracker);
void load_model(const std::filesystem::path& path, TSModel& model, ErrorTracker& tracker);

} // namespace rulkit
