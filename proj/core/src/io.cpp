#include "ldrisk/io.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <utility>

#include "json.hpp"
#include "ldrisk/cramer.hpp"
#include "ldrisk/error.hpp"
#include "ldrisk/extended.hpp"
#include "ldrisk/shortfall.hpp"

namespace ldrisk {

using nlohmann::json;

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::invalid_argument, "cannot read file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::invalid_argument, "cannot write file: " + path);
    out << text;
}

namespace {

json parse_strict(const std::string& text, const char* what) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded())
        throw Error(Errc::invalid_argument, std::string("malformed JSON for ") + what);
    return j;
}

void require_keys(const json& obj, std::initializer_list<const char*> allowed,
                  const char* what) {
    if (!obj.is_object())
        throw Error(Errc::invalid_argument, std::string(what) + " must be a JSON object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* k : allowed)
            if (it.key() == k) known = true;
        if (!known)
            throw Error(Errc::invalid_argument,
                        "unknown key '" + it.key() + "' in " + what);
    }
}

const json& need(const json& obj, const char* key, const char* what) {
    auto it = obj.find(key);
    if (it == obj.end())
        throw Error(Errc::invalid_argument,
                    std::string("missing key '") + key + "' in " + what);
    return *it;
}

double real_from(const json& v, const char* what) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) return parse_real(v.get<std::string>());
    throw Error(Errc::invalid_argument,
                std::string(what) + " must be a number or an inf literal");
}

std::vector<double> reals_from(const json& arr, const char* what) {
    if (!arr.is_array())
        throw Error(Errc::invalid_argument, std::string(what) + " must be an array");
    std::vector<double> out;
    for (const auto& v : arr) out.push_back(real_from(v, what));
    return out;
}

json real_to(double x) { return std::isfinite(x) ? json(x) : json(format_real(x)); }

json reals_to(std::span<const double> v) {
    json arr = json::array();
    for (double x : v) arr.push_back(real_to(x));
    return arr;
}

int int_from(const json& v, const char* what) {
    if (!v.is_number_integer())
        throw Error(Errc::invalid_argument, std::string(what) + " must be an integer");
    return v.get<int>();
}

FiniteMetricSpace space_from(const json& j) {
    require_keys(j, {"labels", "dist"}, "space");
    const json& jl = need(j, "labels", "space");
    if (!jl.is_array()) throw Error(Errc::invalid_argument, "space labels must be an array");
    std::vector<std::string> labels;
    for (const auto& v : jl) labels.push_back(v.get<std::string>());
    const json& jd = need(j, "dist", "space");
    if (!jd.is_array()) throw Error(Errc::invalid_argument, "space dist must be a matrix");
    std::vector<std::vector<double>> dist;
    for (const auto& row : jd) dist.push_back(reals_from(row, "space dist row"));
    return FiniteMetricSpace(std::move(labels), dist);
}

LossExponent loss_from(const json& j) {
    require_keys(j, {"kind", "p", "q", "xs", "ws", "upper"}, "loss");
    std::string kind = need(j, "kind", "loss").get<std::string>();
    if (kind == "linear_scaled") {
        require_keys(j, {"kind"}, "linear loss");
        return LossExponent::linear();
    }
    if (kind == "power_scaled") {
        require_keys(j, {"kind", "p"}, "power loss");
        return LossExponent::power(real_from(need(j, "p", "power loss"), "p"));
    }
    if (kind == "transform_scaled") {
        require_keys(j, {"kind", "q"}, "transform loss");
        return LossExponent::transform_power(real_from(need(j, "q", "transform loss"), "q"));
    }
    if (kind == "custom_table") {
        require_keys(j, {"kind", "xs", "ws", "upper"}, "table loss");
        return LossExponent::table(reals_from(need(j, "xs", "table loss"), "xs"),
                                   reals_from(need(j, "ws", "table loss"), "ws"),
                                   real_from(need(j, "upper", "table loss"), "upper"));
    }
    throw Error(Errc::invalid_argument, "unknown loss kind: " + kind);
}

}  // namespace

FiniteMetricSpace space_from_json(const std::string& text) {
    return space_from(parse_strict(text, "space"));
}

std::string space_to_json(const FiniteMetricSpace& space) {
    json j;
    j["labels"] = space.labels();
    json dist = json::array();
    for (int i = 0; i < space.size(); ++i) {
        json row = json::array();
        for (int k = 0; k < space.size(); ++k) row.push_back(space.distance(i, k));
        dist.push_back(std::move(row));
    }
    j["dist"] = std::move(dist);
    return j.dump(2) + "\n";
}

Subset subset_from_json(const std::string& text, const FiniteMetricSpace& space) {
    json j = parse_strict(text, "subset");
    if (!j.is_array())
        throw Error(Errc::invalid_argument, "subset must be an array of labels");
    Subset s(space.size());
    for (const auto& v : j) s.add(space.index_of(v.get<std::string>()));
    return s;
}

RiskMeasure risk_from_json(const std::string& text) {
    json j = parse_strict(text, "risk measure");
    require_keys(j, {"kind", "space", "gamma", "law", "laws", "loss", "horizon"},
                 "risk measure");
    std::string kind = need(j, "kind", "risk measure").get<std::string>();
    FiniteMetricSpace space = space_from(need(j, "space", "risk measure"));
    if (kind == "atomic") {
        require_keys(j, {"kind", "space", "gamma"}, "atomic risk measure");
        return RiskMeasure::atomic(std::move(space),
                                   reals_from(need(j, "gamma", "atomic"), "gamma"));
    }
    if (kind == "entropic") {
        require_keys(j, {"kind", "space", "law", "horizon"}, "entropic risk measure");
        ProbabilityVector law(reals_from(need(j, "law", "entropic"), "law"));
        return RiskMeasure::entropic(std::move(space), std::move(law),
                                     int_from(need(j, "horizon", "entropic"), "horizon"));
    }
    if (kind == "shortfall") {
        require_keys(j, {"kind", "space", "law", "loss", "horizon"}, "shortfall risk measure");
        ProbabilityVector law(reals_from(need(j, "law", "shortfall"), "law"));
        return RiskMeasure::shortfall(std::move(space), std::move(law),
                                      loss_from(need(j, "loss", "shortfall")),
                                      int_from(need(j, "horizon", "shortfall"), "horizon"));
    }
    if (kind == "robust_entropic") {
        require_keys(j, {"kind", "space", "laws", "horizon"}, "robust risk measure");
        const json& jl = need(j, "laws", "robust");
        if (!jl.is_array())
            throw Error(Errc::invalid_argument, "laws must be an array of arrays");
        std::vector<ProbabilityVector> laws;
        for (const auto& row : jl) laws.emplace_back(reals_from(row, "law"));
        return RiskMeasure::robust_entropic(std::move(space), std::move(laws),
                                            int_from(need(j, "horizon", "robust"), "horizon"));
    }
    throw Error(Errc::invalid_argument, "unknown risk-measure kind: " + kind);
}

LossExponent loss_from_json(const std::string& text) {
    return loss_from(parse_strict(text, "loss"));
}

DistributionSequence family_from_json(const std::string& text) {
    json j = parse_strict(text, "family");
    require_keys(j, {"kind", "m_max", "q_count", "c", "p", "grid", "horizons_hint"}, "family");
    std::string kind = need(j, "kind", "family").get<std::string>();
    if (kind == "counterexample_naturals") {
        require_keys(j, {"kind", "m_max"}, "naturals family");
        int m_max = j.contains("m_max") ? int_from(j["m_max"], "m_max") : 64;
        return counterexample_naturals(m_max);
    }
    if (kind == "counterexample_rationals") {
        require_keys(j, {"kind", "q_count"}, "rationals family");
        int q_count = j.contains("q_count") ? int_from(j["q_count"], "q_count") : 256;
        return counterexample_rationals(q_count);
    }
    if (kind == "two_point") {
        require_keys(j, {"kind", "c"}, "two-point family");
        return two_point_family(real_from(need(j, "c", "two-point family"), "c"));
    }
    if (kind == "sample_mean_bernoulli") {
        require_keys(j, {"kind", "p", "grid", "horizons_hint"}, "sample-mean family");
        double p = real_from(need(j, "p", "sample-mean family"), "p");
        std::vector<double> grid = reals_from(need(j, "grid", "sample-mean family"), "grid");
        std::vector<int> hint;
        if (j.contains("horizons_hint"))
            for (const auto& v : j["horizons_hint"]) hint.push_back(int_from(v, "horizon"));
        else
            hint = default_horizons();
        return sample_mean_family(DiscreteRealLaw::bernoulli(p), grid, hint);
    }
    throw Error(Errc::invalid_argument, "unknown family kind: " + kind);
}

std::string check_reports_to_json(const std::vector<CheckReport>& reports) {
    json arr = json::array();
    for (const auto& r : reports) {
        json j;
        j["check"] = r.check;
        j["detail"] = r.detail;
        j["trials"] = r.trials;
        j["tolerance"] = r.tolerance;
        j["worst_gap"] = real_to(r.worst_gap);
        j["pass"] = r.pass;
        j["witness_f"] = reals_to(r.witness_f);
        j["witness_g"] = reals_to(r.witness_g);
        j["witness_scalar"] = real_to(r.witness_scalar);
        arr.push_back(std::move(j));
    }
    return arr.dump(2) + "\n";
}

std::string ldp_verdict_to_json(const LdpVerdict& verdict) {
    json j;
    j["holds"] = verdict.holds;
    j["subsets_checked"] = verdict.subsets_checked;
    j["tolerance"] = verdict.tolerance;
    j["worst_lower_excess"] = real_to(verdict.worst_lower_excess);
    j["worst_upper_excess"] = real_to(verdict.worst_upper_excess);
    j["witness_lower_bits"] = verdict.witness_lower;
    j["witness_upper_bits"] = verdict.witness_upper;
    return j.dump(2) + "\n";
}

CsvWriter::CsvWriter(std::vector<std::string> columns, std::uint64_t config_hash)
    : columns_(columns.size()) {
    char hex[32];
    std::snprintf(hex, sizeof(hex), "%016llx",
                  static_cast<unsigned long long>(config_hash));
    text_ = std::string("# config_hash=") + hex + "\n";
    row(columns);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_)
        throw Error(Errc::invalid_argument, "CSV row width mismatch");
    for (size_t i = 0; i < cells.size(); ++i) {
        if (i) text_ += ',';
        text_ += cells[i];
    }
    text_ += '\n';
}

void CsvWriter::row_reals(const std::vector<double>& cells) {
    std::vector<std::string> out;
    out.reserve(cells.size());
    for (double x : cells) out.push_back(format_real(x));
    row(out);
}

void CsvWriter::save(const std::string& path) const { write_text_file(path, text_); }

}  // namespace ldrisk
