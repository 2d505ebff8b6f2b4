#include "finikey/cli.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "finikey/errors.hpp"
#include "finikey/optimizer.hpp"
#include "finikey/oracle.hpp"
#include "finikey/sweep.hpp"

namespace finikey::cli {

namespace {

using sweep::format_number;

const std::vector<std::string> kProtocols{"bb84", "six-state"};
const std::vector<std::string> kAttacks{"collective", "coherent", "postselection"};
const std::vector<std::string> kModes{"per-basis", "symmetric"};
const std::vector<std::string> kLeaks{"worst-case", "observed"};
const std::vector<std::string> kFormats{"csv", "json", "gnuplot"};

struct Common {
    std::string protocol = "bb84";
    double sifting_ratio = std::numeric_limits<double>::quiet_NaN();
    double ec_efficiency = 1.1;
    std::string constraints = "per-basis";
    std::string leak = "worst-case";
    double eps_total = 1e-9;
    int m_density = 32;
    int eps_density = 8;
    int refine = 200;

    ProtocolSpec spec() const {
        ProtocolSpec p;
        p.kind = *parse_protocol(protocol);
        p.sifting_ratio = std::isnan(sifting_ratio) ? natural_sifting_ratio(p.kind) : sifting_ratio;
        p.ec_efficiency = ec_efficiency;
        p.constraint_mode = *parse_constraint_mode(constraints);
        p.leak_charge = *parse_leak_charge(leak);
        return p;
    }

    opt::OptimizationSpec optimization(AttackModel model, double N, double qber) const {
        opt::OptimizationSpec s;
        s.model = model;
        s.protocol = spec();
        s.N = N;
        s.qber = qber;
        s.eps_total = eps_total;
        s.m_grid_density = m_density;
        s.eps_grid_density = eps_density;
        s.refine_iterations = refine;
        return s;
    }
};

CLI::Option* add_common(CLI::App* app, Common& c) {
    app->add_option("--protocol", c.protocol, "bb84 | six-state")->check(CLI::IsMember(kProtocols));
    app->add_option("--sifting-ratio", c.sifting_ratio,
                    "N_s/N (default 1/2 for bb84, 1/3 for six-state)");
    app->add_option("--ec-efficiency", c.ec_efficiency, "error-correction efficiency f")->capture_default_str();
    app->add_option("--constraints", c.constraints, "per-basis | symmetric")
        ->check(CLI::IsMember(kModes));
    app->add_option("--leak", c.leak, "charge leak_EC at the worst-case state or the observed QBER")
        ->check(CLI::IsMember(kLeaks));
    app->add_option("--m-density", c.m_density, "optimizer grid points for m")->capture_default_str();
    app->add_option("--eps-density", c.eps_density, "optimizer grid points per eps share")->capture_default_str();
    app->add_option("--refine", c.refine, "max coordinate-descent passes")->capture_default_str();
    return app->add_option("--eps-total", c.eps_total, "total security parameter")->capture_default_str();
}

void print_point(std::ostream& out, const rates::RatePoint& p) {
    auto line = [&out](const char* key, const std::string& value) { out << key << ": " << value << '\n'; };
    line("protocol", std::string(to_string(p.protocol.kind)));
    line("attack", std::string(to_string(p.attack)));
    line("N", format_number(p.N));
    line("qber", format_number(p.qber));
    line("sifting_ratio", format_number(p.protocol.sifting_ratio));
    line("constraints", std::string(to_string(p.protocol.constraint_mode)));
    line("leak", std::string(to_string(p.protocol.leak_charge)));
    line("m", format_number(p.m));
    line("n", format_number(p.n()));
    line("eps_pe", format_number(p.budget.eps_pe));
    line("eps_ec", format_number(p.budget.eps_ec));
    line("eps_pa", format_number(p.budget.eps_pa));
    line("eps_bar", format_number(p.budget.eps_bar));
    line("eps_total", format_number(p.budget.total(p.attack)));
    line("rate", format_number(p.key_rate()));
    line("raw_rate", format_number(p.rate));
    line("xi_pe", format_number(p.bounds.xi_pe));
    line("xi_att", format_number(p.bounds.xi_att));
    line("xi_coh", format_number(p.bounds.xi_coh));
    line("half_width", format_number(p.bounds.half_width));
    line("leak_bits", format_number(p.bounds.leak_bits));
    line("aep_bits_per_signal", format_number(p.bounds.aep_bits_per_signal));
    line("min_entropy", format_number(p.min_entropy));
    std::string lambda;
    for (double l : p.minimizer_lambda) lambda += (lambda.empty() ? "" : " ") + format_number(l);
    line("minimizer_lambda", lambda);
    if (p.infeasible) {
        line("status", "infeasible: " + p.diagnostic);
    } else if (p.rate <= 0.0) {
        line("status", "zero rate: " + (p.diagnostic.empty() ? std::string("no positive key rate") : p.diagnostic));
    } else {
        line("status", "ok");
    }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Finite-key secret key rates for BB84 and six-state QKD", "finikey"};
    app.require_subcommand(1);

    // rate
    Common rate_opts;
    std::string attack_name = "collective";
    double rate_N = 0.0;
    double rate_qber = 0.0;
    double fixed_m = 0.0;
    rates::SecurityBudget fixed;
    auto* rate = app.add_subcommand("rate", "optimized (or fixed-parameter) rate at one point");
    auto* rate_eps_total = add_common(rate, rate_opts);
    rate->add_option("--attack", attack_name, "collective | coherent | postselection")
        ->check(CLI::IsMember(kAttacks));
    rate->add_option("--N", rate_N, "number of initial signals")->required();
    rate->add_option("--qber", rate_qber, "observed QBER")->required();
    auto* opt_m = rate->add_option("--m", fixed_m, "fixed PE sample size (skips optimization)");
    auto* opt_pe = rate->add_option("--eps-pe", fixed.eps_pe, "fixed parameter-estimation failure probability");
    auto* opt_ec = rate->add_option("--eps-ec", fixed.eps_ec, "fixed error-correction failure probability");
    auto* opt_pa = rate->add_option("--eps-pa", fixed.eps_pa, "fixed privacy-amplification failure probability");
    auto* opt_bar = rate->add_option("--eps-bar", fixed.eps_bar, "fixed smoothing parameter");

    // sweep
    Common sweep_opts;
    sweep::SweepRequest request;
    std::vector<std::string> models;
    std::string format = "csv";
    auto* sw = app.add_subcommand("sweep", "optimized rates over a range of N");
    add_common(sw, sweep_opts);
    sw->add_option("--models", models, "comma-separated attack models (default all)")
        ->delimiter(',')
        ->check(CLI::IsMember(kAttacks));
    sw->add_option("--qber", request.qbers, "comma-separated QBER values")->delimiter(',')->required();
    auto* opt_n_list = sw->add_option("--N", request.n_values, "comma-separated N values")->delimiter(',');
    auto* opt_n_min = sw->add_option("--N-min", request.n_min, "smallest N of the log range")->capture_default_str();
    auto* opt_n_max = sw->add_option("--N-max", request.n_max, "largest N of the log range")->capture_default_str();
    auto* opt_count = sw->add_option("--count", request.count, "number of log-spaced N values")->capture_default_str();
    opt_n_list->excludes(opt_n_min)->excludes(opt_n_max)->excludes(opt_count);
    sw->add_option("--format", format, "csv | json | gnuplot")
        ->check(CLI::IsMember(kFormats));
    sw->add_option("--output,-o", request.output_path, "output file, - for stdout")->capture_default_str();

    // compare
    Common cmp_opts;
    double cmp_N = 0.0;
    double cmp_qber = 0.0;
    auto* cmp = app.add_subcommand("compare", "collective, coherent and post-selection rates at one point");
    add_common(cmp, cmp_opts);
    cmp->add_option("--N", cmp_N, "number of initial signals")->required();
    cmp->add_option("--qber", cmp_qber, "observed QBER")->required();

    auto* self = app.add_subcommand("selftest", "check the primary numerics against independent oracles");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    try {
        if (rate->parsed()) {
            const AttackModel attack = *parse_attack_model(attack_name);
            const bool any_fixed = opt_m->count() + opt_pe->count() + opt_ec->count() + opt_pa->count() +
                                       opt_bar->count() > 0;
            rates::RatePoint point;
            if (any_fixed) {
                const bool pe_needed = attack != AttackModel::Coherent;
                const bool complete = opt_m->count() && opt_ec->count() && opt_pa->count() && opt_bar->count() &&
                                      (opt_pe->count() || !pe_needed);
                if (!complete || rate_eps_total->count()) {
                    err << "fixed parameters need --m, --eps-ec, --eps-pa, --eps-bar"
                        << " (and --eps-pe unless --attack coherent), without --eps-total\n"
                        << rate->help();
                    return kExitUsage;
                }
                point = rates::evaluate_rate(attack, rate_opts.spec(), rate_N, fixed_m, rate_qber, fixed);
            } else {
                point = opt::optimize_rate(rate_opts.optimization(attack, rate_N, rate_qber));
            }
            print_point(out, point);
            return kExitOk;
        }

        if (sw->parsed()) {
            request.protocol = sweep_opts.spec();
            if (!models.empty()) {
                request.models.clear();
                for (const auto& m : models) request.models.push_back(*parse_attack_model(m));
            }
            request.format = *sweep::parse_output_format(format);
            request.validate();
            sweep::check_writable(request.output_path);
            request.eps_total = sweep_opts.eps_total;
            request.m_grid_density = sweep_opts.m_density;
            request.eps_grid_density = sweep_opts.eps_density;
            request.refine_iterations = sweep_opts.refine;
            const auto rows = sweep::run_sweep(request, sweep::thread_count_from_env());
            const std::string text = sweep::render(request, rows);
            if (request.output_path == "-") {
                out << text;
            } else {
                sweep::write_output(request.output_path, text);
            }
            return kExitOk;
        }

        if (cmp->parsed()) {
            const auto coll = opt::optimize_rate(cmp_opts.optimization(AttackModel::Collective, cmp_N, cmp_qber));
            const auto coh = opt::optimize_rate(cmp_opts.optimization(AttackModel::Coherent, cmp_N, cmp_qber));
            const auto post = opt::optimize_rate(cmp_opts.optimization(AttackModel::PostSelection, cmp_N, cmp_qber));
            out << "protocol: " << cmp_opts.protocol << '\n'
                << "N: " << format_number(cmp_N) << '\n'
                << "qber: " << format_number(cmp_qber) << '\n'
                << "eps_total: " << format_number(cmp_opts.eps_total) << '\n'
                << "r_coll: " << format_number(coll.key_rate()) << '\n'
                << "r_coh: " << format_number(coh.key_rate()) << '\n'
                << "r_post: " << format_number(post.key_rate()) << '\n';
            if (post.key_rate() > 0.0) {
                const double gain = (coh.key_rate() - post.key_rate()) / post.key_rate() * 100.0;
                out << "coh_over_post_percent: " << format_number(gain) << '\n';
            } else {
                out << "coh_over_post_percent: undefined\n";
            }
            return kExitOk;
        }

        if (self->parsed()) {
            bool all = true;
            for (const auto& r : oracle::run_selftest()) {
                out << (r.passed ? "PASS " : "FAIL ") << r.name << " = " << r.detail << '\n';
                all = all && r.passed;
            }
            return all ? kExitOk : kExitFailure;
        }
    } catch (const sweep::OutputError& e) {
        err << "error: " << e.what() << '\n';
        return kExitCantCreate;
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << '\n';
        return kExitDomain;
    } catch (const InvalidStateError& e) {
        err << "domain error: " << e.what() << '\n';
        return kExitDomain;
    } catch (const InfeasibleError& e) {
        err << "domain error: " << e.what() << '\n';
        return kExitDomain;
    }
    return kExitUsage;
}

}  // namespace finikey::cli
