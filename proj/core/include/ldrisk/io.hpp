#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ldrisk/families.hpp"
#include "ldrisk/large_deviations.hpp"
#include "ldrisk/loss.hpp"
#include "ldrisk/risk_measure.hpp"
#include "ldrisk/state_space.hpp"

// JSON/CSV plumbing. Parsers are strict: unknown keys are rejected so a
// typo in a config never silently falls back to a default. Extended reals
// appear in JSON as numbers or the literals "inf"/"-inf"; CSV cells always
// go through format_real.

namespace ldrisk {

std::uint64_t fnv1a64(std::string_view bytes);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

/// {"labels": [...], "dist": [[...]]}
FiniteMetricSpace space_from_json(const std::string& text);
std::string space_to_json(const FiniteMetricSpace& space);

/// Array of labels, e.g. ["x1", "x3"].
Subset subset_from_json(const std::string& text, const FiniteMetricSpace& space);

/// Discriminated "kind": atomic {space, gamma}, entropic {space, law,
/// horizon}, shortfall {space, law, loss, horizon}, robust_entropic
/// {space, laws, horizon}.
RiskMeasure risk_from_json(const std::string& text);

/// {"kind": "linear_scaled"} | {"kind": "power_scaled", "p": 2} |
/// {"kind": "transform_scaled", "q": 0.5} | {"kind": "custom_table",
/// "xs": [...], "ws": [...], "upper": ...}.
LossExponent loss_from_json(const std::string& text);

/// {"kind": "counterexample_naturals", "m_max": 64} |
/// {"kind": "counterexample_rationals", "q_count": 256} |
/// {"kind": "two_point", "c": 1} |
/// {"kind": "sample_mean_bernoulli", "p": 0.5, "grid": [...],
///  "horizons_hint": [...]}.
DistributionSequence family_from_json(const std::string& text);

std::string check_reports_to_json(const std::vector<CheckReport>& reports);
std::string ldp_verdict_to_json(const LdpVerdict& verdict);

/// Deterministic CSV accumulator: "# config_hash=<hex>" comment, then a
/// header row, then rows; every numeric cell is rendered by format_real.
class CsvWriter {
public:
    CsvWriter(std::vector<std::string> columns, std::uint64_t config_hash);

    void row(const std::vector<std::string>& cells);
    void row_reals(const std::vector<double>& cells);

    const std::string& str() const { return text_; }
    void save(const std::string& path) const;

private:
    std::string text_;
    size_t columns_ = 0;
};

}  // namespace ldrisk
