// ncpl — command line front end: suite runs, instance generation, tail
// curves, and the ergodic decomposition demo.

#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ncpl/ergo.hpp"
#include "ncpl/io.hpp"
#include "ncpl/suite.hpp"

namespace {

ncpl::EnsembleSpec make_spec(const std::string& model, int dim, int steps) {
    if (model == "bounded")
        return ncpl::EnsembleSpec::bounded_self_adjoint(dim, steps);
    if (model == "classical") return ncpl::EnsembleSpec::diagonal_classical(steps);
    if (model == "site") return ncpl::EnsembleSpec::site_tensor(dim, steps);
    if (model == "haar") {
        std::vector<double> spectrum(dim);
        for (int i = 0; i < dim; ++i) spectrum[i] = (i % 2 == 0) ? 1.0 : -1.0;
        return ncpl::EnsembleSpec::haar_conjugated(dim, steps, spectrum);
    }
    throw ncpl::ConfigInvalid("unknown model: " + model);
}

void emit(const std::string& out, const std::string& content) {
    if (out.empty())
        std::cout << content;
    else
        ncpl::write_file(out, content);
}

int run_gordin(std::uint64_t seed, int site_dim, int window) {
    ncpl::ShiftSystem sys;
    sys.site_dim = site_dim;
    sys.window = window;

    ncpl::Rng rng(seed);
    ncpl::Matrix b = ncpl::random_hermitian(rng, site_dim);
    b -= (b.trace() / static_cast<double>(site_dim)) *
         ncpl::Matrix::Identity(site_dim, site_dim);
    ncpl::LocalizedElement f(sys, 0, 0, b);

    ncpl::GordinPair gp = ncpl::gordin_decompose(sys, f);
    ncpl::LocalizedElement tm = ncpl::shift_apply(sys, f, -1);
    double m_gap = ncpl::l2(gp.m - tm);
    double g_gap = ncpl::l2(gp.g + tm);

    std::cout << "single-site gordin demo (seed " << seed << ")\n"
              << "  residual            " << gp.residual << "\n"
              << "  ||m - T^{-1}f||_2   " << m_gap << "\n"
              << "  ||g + T^{-1}f||_2   " << g_gap << "\n";

    bool ok = gp.residual <= 1e-8 && m_gap <= 1e-9 && g_gap <= 1e-9;
    auto reports = ncpl::verify_ergodic_rate(sys, f, 2.0, {2, 4, 8},
                                             ncpl::LpConstants{}, 1e-9);
    std::cout << "  n    lhs          split        rate\n";
    for (const auto& rep : reports) {
        std::cout << "  " << rep.n << "    " << rep.lhs << "  " << rep.split_bound
                  << "  " << rep.rate_bound << (rep.holds ? "" : "  VIOLATION")
                  << "\n";
        ok = ok && rep.holds;
    }
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite-dimensional laboratory for noncommutative deviation bounds"};
    app.require_subcommand(1);

    std::string config_path, out, model = "bounded", suites_csv;
    std::uint64_t seed = 20250824;
    double tol = 1e-9;
    int dim = 8, steps = 4, site_dim = 2, window = 8;
    std::vector<double> r_grid{0.25, 0.5, 1.0, 2.0, 4.0};

    CLI::App* verify = app.add_subcommand("verify", "run the verification suites");
    verify->add_option("--config", config_path, "config file (JSON)");
    verify->add_option("--seed", seed, "root seed");
    verify->add_option("--out", out, "output directory");
    verify->add_option("--suite", suites_csv, "comma-separated suite subset");
    verify->add_option("--tol", tol, "verification tolerance");

    CLI::App* gen = app.add_subcommand("gen", "emit one generated instance");
    gen->add_option("--model", model, "bounded|classical|site|haar");
    gen->add_option("--dim", dim, "dimension (or site dim for tensor models)");
    gen->add_option("--steps", steps, "number of martingale steps");
    gen->add_option("--seed", seed, "instance seed");
    gen->add_option("--out", out, "output file (stdout when omitted)");

    CLI::App* tail = app.add_subcommand("tail", "emit a tail-curve table");
    tail->add_option("--model", model, "bounded|classical|site|haar");
    tail->add_option("--dim", dim, "dimension (or site dim for tensor models)");
    tail->add_option("--steps", steps, "number of martingale steps");
    tail->add_option("--seed", seed, "instance seed");
    tail->add_option("--r", r_grid, "r grid");
    tail->add_option("--out", out, "output file (stdout when omitted)");

    CLI::App* gordin = app.add_subcommand("gordin", "ergodic decomposition demo");
    gordin->add_option("--seed", seed, "instance seed");
    gordin->add_option("--site-dim", site_dim, "site dimension");
    gordin->add_option("--window", window, "half window W");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (verify->parsed()) {
            ncpl::SuiteConfig cfg;
            if (!config_path.empty())
                cfg = ncpl::SuiteConfig::from_json_file(config_path);
            if (verify->count("--seed")) cfg.seed = seed;
            if (verify->count("--tol")) cfg.tol = tol;
            if (!out.empty()) cfg.output_dir = out;
            if (!suites_csv.empty()) {
                cfg.suites.clear();
                std::stringstream ss(suites_csv);
                std::string item;
                while (std::getline(ss, item, ','))
                    if (!item.empty()) cfg.suites.push_back(item);
            }
            ncpl::SuiteSummary summary = ncpl::run_suite(cfg);
            std::cout << "total " << summary.total << ", holds " << summary.holds
                      << ", violations " << summary.violations << ", skipped "
                      << summary.skipped << "\n";
            return summary.violations == 0 ? 0 : 1;
        }
        if (gen->parsed()) {
            ncpl::Martingale m = ncpl::generate(make_spec(model, dim, steps), seed);
            emit(out, ncpl::martingale_to_json(m) + "\n");
            return 0;
        }
        if (tail->parsed()) {
            ncpl::Martingale m = ncpl::generate(make_spec(model, dim, steps), seed);
            std::ostringstream os;
            ncpl::emit_tail_curve(m, r_grid, os);
            emit(out, os.str());
            return 0;
        }
        if (gordin->parsed()) return run_gordin(seed, site_dim, window);
    } catch (const ncpl::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 3;
    } catch (const ncpl::ConfigInvalid& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const ncpl::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
