#include "ncpl/suite.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "ncpl/ergo.hpp"
#include "ncpl/io.hpp"

namespace ncpl {

namespace {

using nlohmann::json;

// Stable suite identifiers for child-stream derivation.
std::uint64_t suite_id_of(const std::string& name) {
    std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
    for (char c : name) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    return h;
}

struct CheckRow {
    std::string suite;
    std::string name;
    std::uint64_t seed = 0;
    double value = 0.0;
    bool ok = false;
    bool skipped = false;
    std::string reason;
};

struct Collector {
    SuiteSummary summary;
    std::vector<CheckRow> rows;
    std::vector<std::string> report_records;

    void add_check(const std::string& suite, const std::string& name,
                   std::uint64_t seed, double value, bool ok) {
        rows.push_back({suite, name, seed, value, ok, false, ""});
        ++summary.total;
        auto& slot = summary.by_name[name];
        ++slot.second;
        if (ok) {
            ++summary.holds;
            ++slot.first;
        } else {
            ++summary.violations;
        }
    }

    void add_skip(const std::string& suite, const std::string& name,
                  std::uint64_t seed, const std::string& reason) {
        rows.push_back({suite, name, seed, 0.0, false, true, reason});
        ++summary.total;
        ++summary.skipped;
        ++summary.by_name[name].second;
    }

    void add_report(const std::string& suite, const VerificationReport& rep) {
        report_records.push_back(report_to_json(rep));
        if (rep.skipped) {
            add_skip(suite, to_string(rep.id), rep.seed, rep.skip_reason);
            return;
        }
        add_check(suite, to_string(rep.id), rep.seed, rep.margin, rep.holds);
    }
};

std::string map_json(const std::map<std::string, double>& m) {
    std::ostringstream os;
    os << "{";
    bool first = true;
    for (const auto& [k, v] : m) {
        if (!first) os << ",";
        first = false;
        os << "\"" << k << "\":" << format_real(v);
    }
    os << "}";
    return os.str();
}

// ---------------------------------------------------------------------------
// Individual suites
// ---------------------------------------------------------------------------

void run_specalg(const SuiteConfig& cfg, Collector& col) {
    std::uint64_t sid = suite_id_of("specalg");
    for (int trial = 0; trial < cfg.trials; ++trial)
        for (int dim : cfg.dims) {
            std::uint64_t seed = derive_stream(cfg.seed, sid, trial * 101 + dim);
            Rng rng(seed);
            TracialAlgebra alg = TracialAlgebra::flat(dim);
            Operator x = random_operator(rng, alg);

            // tau(|x|^p) evaluated spectrally vs as a Lebesgue-Stieltjes sum
            double worst = 0.0;
            Operator a = modulus(x);
            for (double p : {1.0, 2.0, 3.0}) {
                double direct = std::pow(lp_norm(x, p), p);
                double jumps = stieltjes_tail_moment_jump_sum(a, p, 0.0);
                worst = std::max(worst, std::abs(direct - jumps) / (1.0 + direct));
            }
            col.add_check("specalg", "tail_moment_consistency", seed, worst,
                          worst <= 1e-9);

            // mu(t, x) against the sorted singular value list
            std::vector<double> sv = singular_values(x);
            double mu_err = 0.0;
            for (int k = 0; k < dim; ++k)
                mu_err = std::max(
                    mu_err, std::abs(singular_value(x, (k + 0.5) / dim) - sv[k]));
            col.add_check("specalg", "mu_duality", seed, mu_err, mu_err <= 1e-9);

            Operator h1 = random_self_adjoint(rng, alg);
            Operator h2 = random_self_adjoint(rng, alg);
            double gap = golden_thompson_gap(h1, h2);
            col.add_check("specalg", "golden_thompson_gap", seed, gap,
                          gap >= -1e-10);
        }
}

void run_condexp(const SuiteConfig& cfg, Collector& col) {
    std::uint64_t sid = suite_id_of("condexp");
    for (int trial = 0; trial < cfg.trials; ++trial)
        for (int dim : cfg.dims) {
            std::uint64_t seed = derive_stream(cfg.seed, sid, trial * 101 + dim);
            Rng rng(seed);
            TracialAlgebra alg = TracialAlgebra::flat(dim);

            std::vector<std::vector<int>> blocks;
            for (int i = 0; i < dim; i += 2) {
                std::vector<int> b{i};
                if (i + 1 < dim) b.push_back(i + 1);
                blocks.push_back(b);
            }
            std::vector<Operator> samples;
            for (int i = 0; i < 6; ++i) samples.push_back(random_operator(rng, alg));
            CePropertyReport rep = check_ce_properties(
                SubalgebraSpec::block_diagonal(blocks), samples, cfg.tol);
            col.add_check("condexp", "ce_properties", seed,
                          rep.idempotence + rep.module_property, rep.ok);

            EnsembleSpec spec = EnsembleSpec::site_tensor(2, 4);
            auto ds = generate_independent_differences(spec, seed);
            IndependenceReport ind =
                is_independent(ds, SubalgebraSpec::trivial(), 3);
            col.add_check("condexp", "site_independence", seed,
                          ind.worst_violation, ind.independent);
        }
}

void run_mart(const SuiteConfig& cfg, Collector& col) {
    std::uint64_t sid = suite_id_of("mart");
    for (int trial = 0; trial < cfg.trials; ++trial)
        for (int dim : cfg.dims)
            for (int steps : cfg.n_steps) {
                if (steps > dim) continue;
                std::uint64_t seed =
                    derive_stream(cfg.seed, sid, trial * 1009 + dim * 17 + steps);
                Martingale m = generate(
                    EnsembleSpec::bounded_self_adjoint(dim, steps), seed);

                double xnorm = op_norm(m.last());
                for (double lam : cfg.lambda_grid) {
                    double lambda = std::max(1e-3, lam * xnorm);
                    CuculescuFamily fam = cuculescu(m, lambda);
                    CuculescuPropertyReport rep =
                        check_cuculescu_properties(fam, m, cfg.tol);
                    col.add_check("mart", "cuculescu_properties", seed,
                                  rep.cutoff_excess, rep.ok);
                    CuculescuLpReport lp1 = cuculescu_lp_bound(fam, m, 1.0, cfg.tol);
                    CuculescuLpReport lp2 = cuculescu_lp_bound(fam, m, 2.0, cfg.tol);
                    col.add_check("mart", "cuculescu_lp_bound", seed,
                                  std::min(lp1.rhs - lp1.lhs, lp2.rhs - lp2.lhs),
                                  lp1.holds && lp2.holds);
                }

                double ratio = bg_ratio(m, 2.0);
                col.add_check("mart", "bg_ratio_p2", seed, ratio - 1.0,
                              std::abs(ratio - 1.0) <= 1e-10);

                double u = 0.5 * std::max(1e-6, xnorm);
                TruncationPair pair = truncate(m, u);
                double excess = 0.0;
                for (const Operator& dy : pair.y_diffs)
                    excess = std::max(excess, op_norm(dy) - 2.0 * u);
                col.add_check("mart", "truncation_bound", seed, excess,
                              excess <= cfg.tol);
            }
}

void run_devine(const SuiteConfig& cfg, Collector& col) {
    std::uint64_t sid = suite_id_of("devine");
    for (int trial = 0; trial < cfg.trials; ++trial) {
        for (int dim : cfg.dims)
            for (int steps : cfg.n_steps) {
                if (steps > dim) continue;
                std::uint64_t seed =
                    derive_stream(cfg.seed, sid, trial * 2027 + dim * 31 + steps);
                Martingale m = generate(
                    EnsembleSpec::bounded_self_adjoint(dim, steps), seed);

                for (double r : cfg.r_grid)
                    col.add_report("devine", verify_azuma(m, r, seed, cfg.tol));
                for (double lam : cfg.lambda_grid)
                    col.add_report("devine",
                                   verify_max_azuma(m, lam, seed, cfg.tol));
                for (double alpha : cfg.alpha_grid) {
                    ModCramerInternal internal;
                    VerificationReport rep = verify_modified_cramer_ldi(
                        m, 1.0, alpha, &internal, seed, cfg.tol);
                    rep.holds = rep.holds && internal.split_excess <= cfg.tol &&
                                internal.azuma_excess <= cfg.tol &&
                                internal.chebyshev_excess <= cfg.tol &&
                                internal.variance_excess <= cfg.tol &&
                                internal.tail_integral_excess <= cfg.tol;
                    col.add_report("devine", rep);
                }
                col.add_report("devine",
                               verify_cramer_ldi(m, 1.0, 0.5, seed, cfg.tol));

                std::vector<Martingale> audit{m};
                for (double p : cfg.p_grid) {
                    LpConstants consts = audit_lp_constants(audit, p);
                    col.add_report("devine",
                                   verify_lp_ldi(m, 1.0, p, consts, seed, cfg.tol));
                }
            }

        std::uint64_t seed = derive_stream(cfg.seed, sid, 900000 + trial);
        auto ds = generate_independent_differences(
            EnsembleSpec::site_tensor(2, 6), seed);
        try {
            for (double r : cfg.r_grid)
                col.add_report("devine",
                               verify_independent_ldi(ds, r, seed, cfg.tol));
        } catch (const NotIndependent& e) {
            col.add_skip("devine", "IND_LDI", seed, e.what());
        }

        Rng rng(seed);
        Operator x =
            random_self_adjoint(rng, TracialAlgebra::flat(cfg.dims.front()));
        for (double alpha : {1.0, 2.0}) {
            LpsiReport rep = verify_lpsi(x, alpha, cfg.tol);
            col.add_check("devine", "LPSI_EQUIV", seed, rep.tail_excess,
                          rep.chain_ok);
        }
    }
}

void run_ergo(const SuiteConfig& cfg, Collector& col) {
    std::uint64_t sid = suite_id_of("ergo");
    ShiftSystem sys;
    for (int trial = 0; trial < cfg.trials; ++trial) {
        std::uint64_t seed = derive_stream(cfg.seed, sid, trial);
        Rng rng(seed);

        // two-site mean-zero element near the center of the window
        int d = sys.site_dim * sys.site_dim;
        Matrix b = random_hermitian(rng, d);
        b -= (b.trace() / static_cast<double>(d)) * Matrix::Identity(d, d);
        LocalizedElement f(sys, 0, 1, b);

        try {
            GordinPair gp = gordin_decompose(sys, f);
            col.add_check("ergo", "gordin_residual", seed, gp.residual,
                          gp.residual <= 1e-8);
            auto reports =
                verify_ergodic_rate(sys, f, 2.0, {2, 4}, LpConstants{}, cfg.tol);
            for (const auto& rep : reports)
                col.add_check("ergo", "ergodic_rate", seed,
                              rep.split_bound - rep.lhs, rep.holds);
        } catch (const WindowOverflow& e) {
            col.add_skip("ergo", "gordin_residual", seed, e.what());
        }
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// Config
// ---------------------------------------------------------------------------

void SuiteConfig::validate() const {
    if (trials < 1) throw ConfigInvalid("trials must be >= 1");
    if (tol <= 0.0) throw ConfigInvalid("tol must be positive");
    if (dims.empty() || n_steps.empty() || p_grid.empty() || r_grid.empty() ||
        alpha_grid.empty() || lambda_grid.empty())
        throw ConfigInvalid("all grids must be nonempty");
    for (const std::string& s : suites)
        if (s != "specalg" && s != "condexp" && s != "mart" && s != "devine" &&
            s != "ergo")
            throw ConfigInvalid("unknown suite: " + s);
}

SuiteConfig SuiteConfig::from_json_file(const std::string& path) {
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::exception& e) {
        throw ConfigInvalid(std::string("config parse failure: ") + e.what());
    }
    SuiteConfig cfg;
    try {
        if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("dims")) cfg.dims = j["dims"].get<std::vector<int>>();
        if (j.contains("n_steps"))
            cfg.n_steps = j["n_steps"].get<std::vector<int>>();
        if (j.contains("p_grid"))
            cfg.p_grid = j["p_grid"].get<std::vector<double>>();
        if (j.contains("r_grid"))
            cfg.r_grid = j["r_grid"].get<std::vector<double>>();
        if (j.contains("alpha_grid"))
            cfg.alpha_grid = j["alpha_grid"].get<std::vector<double>>();
        if (j.contains("lambda_grid"))
            cfg.lambda_grid = j["lambda_grid"].get<std::vector<double>>();
        if (j.contains("trials")) cfg.trials = j["trials"].get<int>();
        if (j.contains("tol")) cfg.tol = j["tol"].get<double>();
        if (j.contains("output_dir"))
            cfg.output_dir = j["output_dir"].get<std::string>();
        if (j.contains("suites"))
            cfg.suites = j["suites"].get<std::vector<std::string>>();
    } catch (const json::exception& e) {
        throw ConfigInvalid(std::string("config field error: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

std::string SuiteConfig::to_json() const {
    std::ostringstream os;
    auto list = [&os](const auto& v, auto fmt) {
        os << "[";
        for (size_t i = 0; i < v.size(); ++i) {
            if (i) os << ",";
            fmt(v[i]);
        }
        os << "]";
    };
    os << "{\"seed\":" << seed << ",\"dims\":";
    list(dims, [&os](int x) { os << x; });
    os << ",\"n_steps\":";
    list(n_steps, [&os](int x) { os << x; });
    os << ",\"p_grid\":";
    list(p_grid, [&os](double x) { os << format_real(x); });
    os << ",\"r_grid\":";
    list(r_grid, [&os](double x) { os << format_real(x); });
    os << ",\"alpha_grid\":";
    list(alpha_grid, [&os](double x) { os << format_real(x); });
    os << ",\"lambda_grid\":";
    list(lambda_grid, [&os](double x) { os << format_real(x); });
    os << ",\"trials\":" << trials << ",\"tol\":" << format_real(tol)
       << ",\"output_dir\":\"" << output_dir << "\",\"suites\":";
    list(suites, [&os](const std::string& s) { os << "\"" << s << "\""; });
    os << "}";
    return os.str();
}

// ---------------------------------------------------------------------------
// Orchestration
// ---------------------------------------------------------------------------

std::string report_to_json(const VerificationReport& rep) {
    std::ostringstream os;
    os << "{\"inequality_id\":\"" << to_string(rep.id) << "\""
       << ",\"params\":" << map_json(rep.params)
       << ",\"lhs\":" << format_real(rep.lhs) << ",\"rhs\":" << format_real(rep.rhs)
       << ",\"constants_used\":" << map_json(rep.constants_used)
       << ",\"holds\":" << (rep.holds ? "true" : "false")
       << ",\"margin\":" << format_real(rep.margin) << ",\"seed\":" << rep.seed;
    if (rep.skipped) os << ",\"skipped\":true,\"reason\":\"" << rep.skip_reason << "\"";
    os << "}";
    return os.str();
}

SuiteSummary run_suite(const SuiteConfig& config) {
    config.validate();
    std::error_code ec;
    std::filesystem::create_directories(config.output_dir, ec);
    if (ec) throw IoError("cannot create output dir " + config.output_dir);

    Collector col;
    for (const std::string& s : config.suites) {
        if (s == "specalg") run_specalg(config, col);
        else if (s == "condexp") run_condexp(config, col);
        else if (s == "mart") run_mart(config, col);
        else if (s == "devine") run_devine(config, col);
        else if (s == "ergo") run_ergo(config, col);
    }

    // deterministic emission order
    std::sort(col.report_records.begin(), col.report_records.end());
    std::ostringstream reports;
    for (const auto& r : col.report_records) reports << r << "\n";
    write_file(config.output_dir + "/reports.jsonl", reports.str());

    std::ostringstream csv;
    csv << "suite,name,seed,value,ok,skipped,reason\n";
    std::stable_sort(col.rows.begin(), col.rows.end(),
                     [](const CheckRow& a, const CheckRow& b) {
                         return std::tie(a.suite, a.name, a.seed) <
                                std::tie(b.suite, b.name, b.seed);
                     });
    for (const auto& row : col.rows)
        csv << row.suite << "," << row.name << "," << row.seed << ","
            << format_real(row.value) << "," << (row.ok ? 1 : 0) << ","
            << (row.skipped ? 1 : 0) << "," << row.reason << "\n";
    write_file(config.output_dir + "/checks.csv", csv.str());

    std::ostringstream summary;
    summary << "{\"total\":" << col.summary.total
            << ",\"holds\":" << col.summary.holds
            << ",\"violations\":" << col.summary.violations
            << ",\"skipped\":" << col.summary.skipped << ",\"by_name\":{";
    bool first = true;
    for (const auto& [name, counts] : col.summary.by_name) {
        if (!first) summary << ",";
        first = false;
        summary << "\"" << name << "\":{\"holds\":" << counts.first
                << ",\"total\":" << counts.second << "}";
    }
    summary << "}}\n";
    write_file(config.output_dir + "/summary.json", summary.str());
    return col.summary;
}

void emit_tail_curve(const Martingale& m, const std::vector<double>& r_grid,
                     std::ostream& out) {
    const double n = static_cast<double>(m.steps());
    double ssq = 0.0, m2 = 0.0;
    for (size_t k = 0; k < m.steps(); ++k) {
        double c = op_norm(m.difference(k));
        ssq += c * c;
        m2 = std::max(m2, lp_norm(m.difference(k), 2.0));
    }
    out << "r,lhs,rhs_azuma,rhs_cramer,rhs_lp\n";
    for (double r : r_grid) {
        double lhs = distribution(m.last(), r);
        double azuma = ssq > 0.0 ? 2.0 * std::exp(-r * r / (2.0 * ssq)) : 0.0;
        double cramer = 6.0 * std::exp(-0.5 * std::pow(r / n, 2.0 / 3.0) *
                                       std::cbrt(n) / 2.0);
        double lp = r > 0.0 ? 4.0 * m2 * m2 * n / (r * r) : kInfinity;
        out << format_real(r) << "," << format_real(lhs) << ","
            << format_real(azuma) << "," << format_real(cramer) << ","
            << format_real(lp) << "\n";
    }
}

}  // namespace ncpl
