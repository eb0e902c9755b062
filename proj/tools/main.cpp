// Experiment runner: loads fixture configs, runs the library pipelines and
// emits CSV/JSON artifacts. Exit codes: 0 all thresholds met, 1 a check or
// threshold failed, 2 usage / malformed input.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ldrisk/cramer.hpp"
#include "ldrisk/error.hpp"
#include "ldrisk/extended.hpp"
#include "ldrisk/families.hpp"
#include "ldrisk/io.hpp"
#include "ldrisk/large_deviations.hpp"
#include "ldrisk/maxitive.hpp"
#include "ldrisk/risk_measure.hpp"
#include "ldrisk/shortfall.hpp"
#include "ldrisk/state_space.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace ldrisk;

namespace {

struct Options {
    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 1;
    std::vector<int> horizons;
    double tol = -1.0;
};

json load_config(const Options& opt) {
    if (opt.config_path.empty()) return json::object();
    json j = json::parse(read_text_file(opt.config_path), nullptr, false);
    if (j.is_discarded())
        throw Error(Errc::invalid_argument, "malformed JSON config: " + opt.config_path);
    return j;
}

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                         const char* what) {
    if (!obj.is_object())
        throw Error(Errc::invalid_argument, std::string(what) + " config must be a JSON object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* k : allowed)
            if (it.key() == k) known = true;
        if (!known)
            throw Error(Errc::invalid_argument,
                        "unknown key '" + it.key() + "' in " + what + " config");
    }
}

std::uint64_t config_hash(const Options& opt, const json& cfg) {
    std::string blob = cfg.dump();
    blob += "|seed=" + std::to_string(opt.seed);
    blob += "|tol=" + format_real(opt.tol);
    blob += "|horizons=";
    for (int n : opt.horizons) blob += std::to_string(n) + ",";
    return fnv1a64(blob);
}

std::string out_file(const Options& opt, const std::string& name) {
    fs::create_directories(opt.out_dir);
    return (fs::path(opt.out_dir) / name).string();
}

json real_to(double x) { return std::isfinite(x) ? json(x) : json(format_real(x)); }

void line_result(const std::string& what, bool pass, const std::string& detail) {
    std::cout << (pass ? "[PASS] " : "[FAIL] ") << what;
    if (!detail.empty()) std::cout << " (" << detail << ")";
    std::cout << "\n";
}

std::vector<int> pick_horizons(const Options& opt, std::vector<int> fallback) {
    return opt.horizons.empty() ? std::move(fallback) : opt.horizons;
}

RiskMeasure risk_from_config(const json& cfg, const char* cmd) {
    if (!cfg.contains("risk"))
        throw Error(Errc::invalid_argument,
                    std::string(cmd) + " needs a config with a \"risk\" entry");
    return risk_from_json(cfg.at("risk").dump());
}

// ---------------------------------------------------------------- check

int cmd_check(const Options& opt) {
    json cfg = load_config(opt);
    reject_unknown_keys(cfg, {"risk"}, "check");
    RiskMeasure phi = risk_from_config(cfg, "check");

    const int trials = 1000;
    std::vector<CheckReport> reports;
    reports.push_back(check_monetary_axioms(phi, trials, opt.seed, 5.0, opt.tol));
    reports.push_back(check_max_stability(phi, trials, opt.seed + 1, 5.0, opt.tol));
    reports.push_back(check_convexity(phi, trials, opt.seed + 2, 5.0, opt.tol));

    RepresentationReport rep = representation_check(phi, trials, opt.seed + 3, opt.tol);
    CheckReport repc;
    repc.check = "representation";
    repc.detail = "phi vs maxitive integral of its own concentrations";
    repc.trials = rep.trials;
    repc.tolerance = rep.tolerance;
    repc.worst_gap = rep.worst_gap;
    repc.pass = rep.pass;
    repc.witness_f = rep.witness_f;
    reports.push_back(repc);

    write_text_file(out_file(opt, "check_report.json"), check_reports_to_json(reports));
    bool all = true;
    for (const auto& r : reports) {
        line_result(r.check, r.pass, "worst gap " + format_real(r.worst_gap));
        all = all && r.pass;
    }
    return all ? 0 : 1;
}

// ---------------------------------------------------------------- ldp / lp

RateFunction rate_override_or_balls(const json& cfg, const RiskMeasure& phi) {
    if (cfg.contains("rate")) {
        RateFunction rate;
        for (const auto& v : cfg.at("rate")) {
            if (v.is_number())
                rate.values.push_back(v.get<double>());
            else
                rate.values.push_back(parse_real(v.get<std::string>()));
        }
        if (rate.size() != phi.space().size())
            throw Error(Errc::invalid_argument, "rate override has the wrong length");
        return rate;
    }
    return rate_from_balls(phi);
}

int cmd_ldp(const Options& opt) {
    json cfg = load_config(opt);
    reject_unknown_keys(cfg, {"risk", "rate"}, "ldp");
    RiskMeasure phi = risk_from_config(cfg, "ldp");
    const int k = phi.space().size();
    if (k > 15)
        throw Error(Errc::invalid_argument, "exhaustive LDP table capped at 15 points");
    const double tol = opt.tol >= 0.0 ? opt.tol : 1e-10;
    const std::uint64_t hash = config_hash(opt, cfg);

    bool holds = false;
    json summary;
    ConcentrationTable table = ConcentrationTable::from_risk(phi);
    RateFunction rate;
    if (cfg.contains("rate")) {
        rate = rate_override_or_balls(cfg, phi);
        LdpVerdict verdict = ldp_check(table, rate, phi.space(), tol);
        holds = verdict.holds;
        write_text_file(out_file(opt, "ldp_verdict.json"), ldp_verdict_to_json(verdict));
        line_result("ldp sandwich (supplied rate)", holds,
                    std::to_string(verdict.subsets_checked) + " subsets");
    } else {
        EquivalenceOptions eopts;
        eopts.seed = opt.seed;
        eopts.tol = tol;
        EquivalenceReport report = varadhan_bryc_equivalence(phi, eopts);
        rate = report.rate;
        holds = report.holds;
        summary["ldp"] = json::parse(ldp_verdict_to_json(report.ldp));
        summary["lp_holds"] = report.lp.holds;
        summary["lp_worst_gap"] = real_to(report.lp.worst_gap);
        summary["uniqueness_ok"] = report.uniqueness_ok;
        summary["perturbations_tested"] = report.perturbations_tested;
        summary["holds"] = report.holds;
        write_text_file(out_file(opt, "ldp_verdict.json"), summary.dump(2) + "\n");
        line_result("ldp sandwich", report.ldp.holds,
                    std::to_string(report.ldp.subsets_checked) + " subsets");
        line_result("laplace principle", report.lp.holds,
                    "worst gap " + format_real(report.lp.worst_gap));
        line_result("rate uniqueness", report.uniqueness_ok,
                    std::to_string(report.perturbations_tested) + " perturbations");
    }

    CsvWriter bounds({"subset_mask", "members", "lower_bound", "J", "upper_bound"}, hash);
    for (std::uint64_t bits = 0; bits < (1ULL << k); ++bits) {
        Subset a = Subset::from_bits(k, bits);
        auto [interior, closure] = interior_closure(phi.space(), a);
        std::string mask(static_cast<size_t>(k), '0');
        std::string members;
        for (int i = 0; i < k; ++i)
            if (a.contains(i)) {
                mask[static_cast<size_t>(i)] = '1';
                if (!members.empty()) members += '|';
                members += phi.space().label(i);
            }
        bounds.row({mask, members, format_real(-rate.min_over(interior)),
                    format_real(table.at_bits(bits)), format_real(-rate.min_over(closure))});
    }
    bounds.save(out_file(opt, "ldp_bounds.csv"));

    CsvWriter ratecsv({"point", "rate"}, hash);
    for (int i = 0; i < k; ++i) ratecsv.row({phi.space().label(i), format_real(rate.at(i))});
    ratecsv.save(out_file(opt, "rate_function.csv"));
    return holds ? 0 : 1;
}

int cmd_lp(const Options& opt) {
    json cfg = load_config(opt);
    reject_unknown_keys(cfg, {"risk", "rate"}, "lp");
    RiskMeasure phi = risk_from_config(cfg, "lp");
    RateFunction rate = rate_override_or_balls(cfg, phi);
    const double tol = opt.tol >= 0.0 ? opt.tol : phi.default_tolerance();
    const int trials = 200;
    const std::uint64_t hash = config_hash(opt, cfg);

    std::mt19937_64 rng(opt.seed);
    CsvWriter csv({"trial", "phi", "lp_value", "gap"}, hash);
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
        BoundedFunction f = random_function(phi.space().size(), rng, 5.0);
        double v = phi(f);
        double lp = lp_value(f, rate);
        worst = std::max(worst, abs_gap(v, lp));
        csv.row({std::to_string(t), format_real(v), format_real(lp), format_real(v - lp)});
    }
    csv.save(out_file(opt, "lp_table.csv"));

    json summary;
    summary["trials"] = trials;
    summary["tolerance"] = tol;
    summary["worst_gap"] = real_to(worst);
    summary["holds"] = worst <= tol;
    write_text_file(out_file(opt, "lp_report.json"), summary.dump(2) + "\n");
    line_result("laplace principle", worst <= tol, "worst gap " + format_real(worst));
    return worst <= tol ? 0 : 1;
}

// ------------------------------------------------------- counterexample

void envelope_rows(CsvWriter& csv, const std::string& quantity, const HorizonEstimate& est) {
    const auto upper = est.upper_envelope();
    const auto lower = est.lower_envelope();
    for (size_t i = 0; i < est.values.size(); ++i)
        csv.row({quantity, std::to_string(est.horizons[i]), format_real(est.values[i]),
                 format_real(upper[i]), format_real(lower[i]),
                 est.flagged[i] ? "1" : "0"});
}

int counterexample_naturals_pipeline(const Options& opt, const json& cfg,
                                     const DistributionSequence& fam) {
    const std::vector<int> horizons = pick_horizons(opt, default_horizons(3, 8));
    const double rate_tol = opt.tol >= 0.0 ? opt.tol : 1e-6;
    const LossExponent linear = LossExponent::linear();
    const AsymptoticOptions aopts;
    CsvWriter csv({"quantity", "n", "value", "upper_env", "lower_env", "flagged"},
                  config_hash(opt, cfg));

    const int probes = std::min(8, fam.space().size());
    bool rate_pass = true, tail_pass = true;
    std::vector<double> rate_probe;
    for (int m = 1; m <= probes; ++m) {
        HorizonEstimate est = wrate_point(fam, m - 1, linear, horizons, aopts);
        envelope_rows(csv, "rate@" + fam.space().label(m - 1), est);
        rate_probe.push_back(est.lower());
        rate_pass = rate_pass && std::abs(est.lower() - m) <= rate_tol;

        Subset prefix = Subset(fam.space().size());
        for (int i = 0; i < m; ++i) prefix.add(i);
        HorizonEstimate tail = wrate_set(fam, prefix.complement(), linear, horizons, aopts);
        envelope_rows(csv, "tail_neg_j@" + fam.space().label(m - 1), tail);
        tail_pass = tail_pass && tail.lower() <= 1e-2;
    }

    // the dual side sees the diagonal atoms the rate function cannot:
    // phi(1) stays near 1 while sup{1 - I} = 1 - min I = 0
    BoundedFunction ones = BoundedFunction::constant(fam.space().size(), 1.0);
    HorizonEstimate ent = asymptotic_entropy(fam, ones, horizons, aopts);
    envelope_rows(csv, "entropy_f1", ent);
    // Ball rates at a point m dip once, at the diagonal horizon n = m; the
    // liminf ignores that transient but a finite window cannot, so the rate
    // fed to the dual side is estimated past the last diagonal horizon.
    std::vector<int> beyond;
    for (int n : horizons)
        if (n > fam.space().size()) beyond.push_back(n);
    AsymptoticOptions ropts = aopts;
    if (!beyond.empty()) ropts.tail_window = std::min<int>(aopts.tail_window,
                                                           static_cast<int>(beyond.size()));
    RateFunction rate = wrate_rate(fam, linear, beyond.empty() ? horizons : beyond, ropts);
    double lp = lp_value(ones, rate);
    double gap = ent.upper() - lp;
    bool gap_pass = gap >= 0.9;
    csv.save(out_file(opt, "counterexample_naturals.csv"));

    json summary;
    summary["fixture"] = fam.name();
    summary["rate_estimates"] = rate_probe;
    summary["rate_pass"] = rate_pass;
    summary["tail_pass"] = tail_pass;
    summary["lp_value"] = real_to(lp);
    summary["entropy_f1"] = real_to(ent.upper());
    summary["lp_gap"] = real_to(gap);
    summary["gap_pass"] = gap_pass;
    summary["pass"] = rate_pass && tail_pass && gap_pass;
    write_text_file(out_file(opt, "counterexample_summary.json"), summary.dump(2) + "\n");

    line_result("singleton rates linear in the point", rate_pass, "tol " + format_real(rate_tol));
    line_result("tail concentrations vanish", tail_pass, "");
    line_result("laplace gap for f=1", gap_pass, "gap " + format_real(gap));
    return summary["pass"].get<bool>() ? 0 : 1;
}

int counterexample_rationals_pipeline(const Options& opt, const json& cfg,
                                      const DistributionSequence& fam) {
    const int k = fam.space().size();
    std::vector<int> horizons = opt.horizons;
    if (horizons.empty())
        for (int n = 1; n <= k; ++n) horizons.push_back(n);  // one full cycle
    AsymptoticOptions aopts;
    aopts.tail_window = static_cast<int>(horizons.size());
    const double rate_tol = opt.tol >= 0.0 ? opt.tol : 1e-9;
    const LossExponent linear = LossExponent::linear();
    CsvWriter csv({"quantity", "n", "value", "upper_env", "lower_env", "flagged"},
                  config_hash(opt, cfg));

    bool rate_pass = true;
    double worst_rate = 0.0;
    for (int x = 0; x < k; ++x) {
        HorizonEstimate est = wrate_point(fam, x, linear, horizons, aopts);
        if (x < 3) envelope_rows(csv, "rate@" + fam.space().label(x), est);
        double r = est.lower();
        worst_rate = std::max(worst_rate, std::abs(r));
        rate_pass = rate_pass && std::abs(r) <= rate_tol;
    }

    bool tail_pass = true;
    for (int j : {1, k / 16 > 0 ? k / 16 : 1, k / 2}) {
        Subset prefix(k);
        for (int i = 0; i < j; ++i) prefix.add(i);
        HorizonEstimate tail = wrate_set(fam, prefix.complement(), linear, horizons, aopts);
        envelope_rows(csv, "tail_neg_j@first" + std::to_string(j), tail);
        tail_pass = tail_pass && tail.lower() == 0.0;  // point masses: exact
    }
    csv.save(out_file(opt, "counterexample_rationals.csv"));

    json summary;
    summary["fixture"] = fam.name();
    summary["worst_rate"] = real_to(worst_rate);
    summary["rate_pass"] = rate_pass;
    summary["tail_pass"] = tail_pass;
    summary["pass"] = rate_pass && tail_pass;
    write_text_file(out_file(opt, "counterexample_summary.json"), summary.dump(2) + "\n");

    line_result("rates vanish at enumerated points", rate_pass,
                "worst " + format_real(worst_rate));
    line_result("tail concentrations exactly zero", tail_pass, "");
    return summary["pass"].get<bool>() ? 0 : 1;
}

int cmd_counterexample(const Options& opt) {
    json cfg = load_config(opt);
    reject_unknown_keys(cfg, {"family"}, "counterexample");
    DistributionSequence fam =
        cfg.contains("family")
            ? family_from_json(cfg.at("family").dump())
            : counterexample_naturals();
    if (fam.name().starts_with("naturals"))
        return counterexample_naturals_pipeline(opt, cfg, fam);
    if (fam.name().starts_with("rationals"))
        return counterexample_rationals_pipeline(opt, cfg, fam);
    throw Error(Errc::invalid_argument,
                "counterexample expects one of the counterexample families");
}

// ---------------------------------------------------------------- cramer

double bernoulli_rate(double x, double p) {
    if (x < 0.0 || x > 1.0) return pos_inf;
    double a = x == 0.0 ? 0.0 : x * std::log(x / p);
    double b = x == 1.0 ? 0.0 : (1.0 - x) * std::log((1.0 - x) / (1.0 - p));
    return a + b;
}

int cmd_cramer(const Options& opt) {
    json cfg = load_config(opt);
    reject_unknown_keys(cfg, {"p", "delta", "probe_x", "grid_points"}, "cramer");
    const double p = cfg.contains("p") ? cfg.at("p").get<double>() : 0.5;
    CramerOptions copts;
    if (cfg.contains("delta")) copts.delta = cfg.at("delta").get<double>();
    if (cfg.contains("probe_x")) copts.probe_x = cfg.at("probe_x").get<std::vector<double>>();
    if (cfg.contains("grid_points")) copts.grid_points = cfg.at("grid_points").get<int>();
    copts.horizons = pick_horizons(opt, copts.horizons);

    DiscreteRealLaw law = DiscreteRealLaw::bernoulli(p);
    CramerReport report = cramer_demo(law, copts);
    const std::uint64_t hash = config_hash(opt, cfg);

    double legendre_gap = 0.0;
    CsvWriter ratecsv({"x", "rate_numeric", "rate_closed_form", "gap"}, hash);
    for (size_t i = 0; i < report.grid.size(); ++i) {
        double closed = bernoulli_rate(report.grid[i], p);
        legendre_gap = std::max(legendre_gap, abs_gap(report.rate_numeric[i], closed));
        ratecsv.row({format_real(report.grid[i]), format_real(report.rate_numeric[i]),
                     format_real(closed), format_real(report.rate_numeric[i] - closed)});
    }
    ratecsv.save(out_file(opt, "cramer_rate.csv"));

    CsvWriter balls({"x", "delta", "n", "value", "estimate"}, hash);
    for (const auto& row : report.ball_rows)
        for (size_t i = 0; i < row.values.size(); ++i)
            balls.row({format_real(row.x), format_real(row.delta),
                       std::to_string(row.horizons[i]), format_real(row.values[i]),
                       format_real(row.estimate)});
    balls.save(out_file(opt, "cramer_balls.csv"));

    const double ball_tol = opt.tol >= 0.0 ? opt.tol : 5e-2;
    bool legendre_pass = legendre_gap <= 1e-6;
    bool ball_pass = report.sup_gap <= ball_tol;

    json summary;
    summary["p"] = p;
    summary["legendre_gap"] = real_to(legendre_gap);
    summary["ball_gap"] = real_to(report.sup_gap);
    summary["pass"] = legendre_pass && ball_pass;
    write_text_file(out_file(opt, "cramer_summary.json"), summary.dump(2) + "\n");

    line_result("legendre transform vs closed form", legendre_pass,
                "sup gap " + format_real(legendre_gap));
    line_result("ball rates vs rate function", ball_pass,
                "sup gap " + format_real(report.sup_gap));
    return (legendre_pass && ball_pass) ? 0 : 1;
}

// ------------------------------------------------------------- shortfall

int cmd_shortfall(const Options& opt) {
    json cfg = load_config(opt);
    reject_unknown_keys(cfg, {"family", "loss"}, "shortfall");
    DistributionSequence fam = cfg.contains("family")
                                   ? family_from_json(cfg.at("family").dump())
                                   : two_point_family(1.0);
    LossExponent loss =
        cfg.contains("loss") ? loss_from_json(cfg.at("loss").dump()) : LossExponent::linear();
    std::vector<int> horizons = pick_horizons(opt, [] {
        std::vector<int> hs;
        for (int n = 1; n <= 1024; n *= 2) hs.push_back(n);
        return hs;
    }());
    const AsymptoticOptions aopts;
    const std::uint64_t hash = config_hash(opt, cfg);
    CsvWriter csv({"quantity", "n", "shortfall", "reference", "gap"}, hash);

    const int k = fam.space().size();
    bool coincide_pass = true;
    double worst_coincide = 0.0;
    if (loss.kind() == LossExponent::Kind::linear_scaled) {
        std::mt19937_64 rng(opt.seed);
        for (int t = 0; t < 5; ++t) {
            BoundedFunction f = random_function(k, rng, 3.0);
            ShortfallAsymptotics sa = asymptotic_shortfall(fam, f, loss, horizons, aopts);
            HorizonEstimate ent = asymptotic_entropy(fam, f, horizons, aopts);
            for (size_t i = 0; i < sa.estimate.values.size(); ++i) {
                double gap = abs_gap(sa.estimate.values[i], ent.values[i]);
                worst_coincide = std::max(worst_coincide, gap);
                csv.row({"coincidence_f" + std::to_string(t),
                         std::to_string(sa.estimate.horizons[i]),
                         format_real(sa.estimate.values[i]), format_real(ent.values[i]),
                         format_real(sa.estimate.values[i] - ent.values[i])});
            }
        }
        coincide_pass = worst_coincide <= 1e-8;
    }

    // concentration of the tail point by two unrelated routes
    Subset tail_set = Subset::of(k, {k - 1});
    HorizonEstimate formula = wrate_set(fam, tail_set, loss, horizons, aopts);
    {
        const auto lower = formula.lower_envelope();
        for (size_t i = 0; i < formula.values.size(); ++i)
            csv.row({"wrate_tail", std::to_string(formula.horizons[i]),
                     format_real(formula.values[i]), format_real(lower[i]),
                     format_real(formula.values[i] - lower[i])});
    }
    double j_formula = -formula.lower();
    RiskMeasure envelope_phi = upper_asymptotic_shortfall_measure(fam, loss, horizons, aopts);
    ConcentrationResult j_infr = concentration(envelope_phi, tail_set);
    double cross_gap = abs_gap(j_formula, j_infr.value);
    const double cross_tol = opt.tol >= 0.0 ? opt.tol : 1e-4;
    bool cross_pass = j_infr.converged && cross_gap <= cross_tol;
    csv.row({"concentration_tail", "0", format_real(j_infr.value), format_real(j_formula),
             format_real(j_infr.value - j_formula)});
    csv.save(out_file(opt, "shortfall_convergence.csv"));

    json summary;
    summary["family"] = fam.name();
    summary["coincidence_gap"] = real_to(worst_coincide);
    summary["coincidence_pass"] = coincide_pass;
    summary["j_formula"] = real_to(j_formula);
    summary["j_inf_r"] = real_to(j_infr.value);
    summary["cross_gap"] = real_to(cross_gap);
    summary["cross_pass"] = cross_pass;
    summary["pass"] = coincide_pass && cross_pass;
    write_text_file(out_file(opt, "shortfall_summary.json"), summary.dump(2) + "\n");

    if (loss.kind() == LossExponent::Kind::linear_scaled)
        line_result("shortfall matches entropic", coincide_pass,
                    "worst gap " + format_real(worst_coincide));
    line_result("concentration two-route agreement", cross_pass,
                "gap " + format_real(cross_gap));
    return (coincide_pass && cross_pass) ? 0 : 1;
}

// -------------------------------------------------------- transformed-ldp

int cmd_transformed_ldp(const Options& opt) {
    json cfg = load_config(opt);
    reject_unknown_keys(cfg, {"family", "loss", "lp_trials"}, "transformed-ldp");

    DistributionSequence fam = [&] {
        if (cfg.contains("family")) return family_from_json(cfg.at("family").dump());
        std::vector<double> grid;
        for (int i = 1; i <= 19; ++i) grid.push_back(0.05 * i);
        return sample_mean_family(DiscreteRealLaw::bernoulli(0.5), grid, default_horizons());
    }();
    LossExponent loss = cfg.contains("loss") ? loss_from_json(cfg.at("loss").dump())
                                             : LossExponent::transform_power(0.5);

    TransformedLdpOptions topts;
    topts.horizons = pick_horizons(opt, topts.horizons);
    topts.seed = opt.seed;
    if (cfg.contains("lp_trials")) topts.lp_trials = cfg.at("lp_trials").get<int>();
    TransformedLdpReport report = transformed_ldp_demo(fam, loss, topts);

    const std::uint64_t hash = config_hash(opt, cfg);
    CsvWriter csv({"point", "rate_linear", "rate_transformed", "rate_direct", "gap"}, hash);
    for (int i = 0; i < fam.space().size(); ++i) {
        size_t u = static_cast<size_t>(i);
        csv.row({fam.space().label(i), format_real(report.rate_linear[u]),
                 format_real(report.rate_transformed[u]), format_real(report.rate_direct[u]),
                 format_real(abs_gap(report.rate_transformed[u], report.rate_direct[u]))});
    }
    csv.save(out_file(opt, "transformed_rates.csv"));

    const double tol = opt.tol >= 0.0 ? opt.tol : 5e-2;
    bool rate_pass = report.max_rate_gap <= tol;
    bool lp_pass = report.worst_lp_gap <= tol;

    json summary;
    summary["max_rate_gap"] = real_to(report.max_rate_gap);
    summary["worst_lp_gap"] = real_to(report.worst_lp_gap);
    summary["lp_trials"] = report.lp_trials;
    summary["flagged"] = report.flagged;
    summary["pass"] = rate_pass && lp_pass;
    write_text_file(out_file(opt, "transformed_summary.json"), summary.dump(2) + "\n");

    line_result("transformed rate two-route agreement", rate_pass,
                "gap " + format_real(report.max_rate_gap));
    line_result("transformed laplace principle", lp_pass,
                "worst gap " + format_real(report.worst_lp_gap));
    return (rate_pass && lp_pass) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"max-stable risk measures, concentration functions and"
                 " large-deviation experiments"};
    app.require_subcommand(1);

    Options opt;
    auto add_common = [&opt](CLI::App* sub) {
        sub->add_option("--config", opt.config_path, "JSON config file");
        sub->add_option("--seed", opt.seed, "RNG seed");
        sub->add_option("--out", opt.out_dir, "output directory");
        sub->add_option("--horizons", opt.horizons, "comma-separated horizon grid")
            ->delimiter(',');
        sub->add_option("--tol", opt.tol, "tolerance override");
    };

    CLI::App* c_check = app.add_subcommand(
        "check", "axiom, max-stability, convexity and representation checks");
    CLI::App* c_ldp = app.add_subcommand(
        "ldp", "exhaustive large-deviation sandwich with rate uniqueness");
    CLI::App* c_lp = app.add_subcommand("lp", "dual (Laplace) representation table");
    CLI::App* c_ce = app.add_subcommand(
        "counterexample", "families where the sandwich holds but duality fails");
    CLI::App* c_cramer = app.add_subcommand(
        "cramer", "sample-mean rate function vs exact finite-n ball rates");
    CLI::App* c_short = app.add_subcommand(
        "shortfall", "asymptotic shortfall coincidence and concentrations");
    CLI::App* c_trans = app.add_subcommand(
        "transformed-ldp", "rate transformation driven by a rescaled loss");
    for (CLI::App* sub : {c_check, c_ldp, c_lp, c_ce, c_cramer, c_short, c_trans})
        add_common(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (c_check->parsed()) return cmd_check(opt);
        if (c_ldp->parsed()) return cmd_ldp(opt);
        if (c_lp->parsed()) return cmd_lp(opt);
        if (c_ce->parsed()) return cmd_counterexample(opt);
        if (c_cramer->parsed()) return cmd_cramer(opt);
        if (c_short->parsed()) return cmd_shortfall(opt);
        if (c_trans->parsed()) return cmd_transformed_ldp(opt);
    } catch (const Error& e) {
        std::cerr << "error [" << errc_name(e.code()) << "]: " << e.what() << "\n";
        return e.code() == Errc::not_max_stable ? 1 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
