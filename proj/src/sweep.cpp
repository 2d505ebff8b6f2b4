#include "finikey/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "finikey/errors.hpp"

namespace finikey::sweep {

namespace {

constexpr double kMinSignals = 1e2;
constexpr double kMaxSignals = 1e16;
constexpr std::size_t kMaxPoints = 10000;

struct Job {
    AttackModel model;
    double qber;
    double N;
};

}  // namespace

std::optional<OutputFormat> parse_output_format(std::string_view text) {
    if (text == "csv") return OutputFormat::Csv;
    if (text == "json") return OutputFormat::Json;
    if (text == "gnuplot") return OutputFormat::Gnuplot;
    return std::nullopt;
}

void SweepRequest::validate() const {
    protocol.validate();
    if (models.empty()) throw DomainError("sweep needs at least one attack model");
    if (qbers.empty()) throw DomainError("sweep needs at least one QBER");
    for (double q : qbers) {
        if (!(q >= 0.0 && q <= 0.5)) throw DomainError("QBER must lie in [0, 1/2]");
    }
    if (!(eps_total > 0.0 && eps_total < 1.0)) throw DomainError("eps_total must lie in (0, 1)");
    auto in_range = [](double N) { return N >= kMinSignals && N <= kMaxSignals; };
    if (n_values.empty()) {
        if (count < 1 || static_cast<std::size_t>(count) > kMaxPoints) {
            throw DomainError("N count must lie in [1, 10000]");
        }
        if (!in_range(n_min) || !in_range(n_max) || n_min > n_max) {
            throw DomainError("N range must satisfy 1e2 <= N_min <= N_max <= 1e16");
        }
    } else {
        if (n_values.size() > kMaxPoints) throw DomainError("at most 10000 N values");
        for (double N : n_values) {
            if (!in_range(N)) throw DomainError("every N must lie in [1e2, 1e16]");
        }
    }
}

std::vector<double> SweepRequest::signal_counts() const {
    std::vector<double> out;
    if (!n_values.empty()) {
        for (double N : n_values) out.push_back(std::round(N));
    } else if (count == 1) {
        out.push_back(std::round(n_min));
    } else {
        const double lo = std::log10(n_min);
        const double hi = std::log10(n_max);
        for (int k = 0; k < count; ++k) {
            out.push_back(std::round(std::pow(10.0, lo + (hi - lo) * k / (count - 1))));
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<AttackModel> SweepRequest::canonical_models() const {
    std::vector<AttackModel> out;
    for (AttackModel m : {AttackModel::Collective, AttackModel::Coherent, AttackModel::PostSelection}) {
        if (std::find(models.begin(), models.end(), m) != models.end()) out.push_back(m);
    }
    return out;
}

unsigned thread_count_from_env() {
    if (const char* env = std::getenv("FINIKEY_THREADS")) {
        unsigned value = 0;
        const std::string_view text(env);
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec == std::errc() && ptr == text.data() + text.size() && value > 0) return value;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<rates::RatePoint> run_sweep(const SweepRequest& request, unsigned threads) {
    request.validate();
    std::vector<Job> jobs;
    const auto counts = request.signal_counts();
    for (AttackModel model : request.canonical_models())
        for (double q : request.qbers)
            for (double N : counts) jobs.push_back({model, q, N});

    std::vector<rates::RatePoint> rows(jobs.size());
    std::vector<std::exception_ptr> errors(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++) {
            try {
                opt::OptimizationSpec spec;
                spec.model = jobs[i].model;
                spec.protocol = request.protocol;
                spec.N = jobs[i].N;
                spec.qber = jobs[i].qber;
                spec.eps_total = request.eps_total;
                spec.m_grid_density = request.m_grid_density;
                spec.eps_grid_density = request.eps_grid_density;
                spec.refine_iterations = request.refine_iterations;
                rows[i] = opt::optimize_rate(spec);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };

    const unsigned n_workers = std::clamp<unsigned>(threads, 1u, static_cast<unsigned>(std::max<std::size_t>(jobs.size(), 1)));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < n_workers; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return rows;
}

std::string format_number(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 9);
    if (ec != std::errc()) return "nan";
    return std::string(buf, ptr);
}

std::string render_csv(const std::vector<rates::RatePoint>& rows) {
    std::string out = "protocol,attack,N,qber,m_opt,eps_pe,eps_ec,eps_pa,eps_bar,rate\n";
    for (const auto& r : rows) {
        out += to_string(r.protocol.kind);
        out += ',';
        out += to_string(r.attack);
        for (double v : {r.N, r.qber, r.m, r.budget.eps_pe, r.budget.eps_ec, r.budget.eps_pa, r.budget.eps_bar,
                         r.key_rate()}) {
            out += ',';
            out += format_number(v);
        }
        out += '\n';
    }
    return out;
}

std::string render_json(const SweepRequest& request, const std::vector<rates::RatePoint>& rows) {
    nlohmann::ordered_json doc;
    doc["protocol"] = std::string(to_string(request.protocol.kind));
    doc["sifting_ratio"] = request.protocol.sifting_ratio;
    doc["ec_efficiency"] = request.protocol.ec_efficiency;
    doc["constraints"] = std::string(to_string(request.protocol.constraint_mode));
    doc["leak"] = std::string(to_string(request.protocol.leak_charge));
    doc["eps_total"] = request.eps_total;
    auto& list = doc["rows"] = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
        nlohmann::ordered_json row;
        row["attack"] = std::string(to_string(r.attack));
        row["N"] = r.N;
        row["qber"] = r.qber;
        row["m_opt"] = r.m;
        row["eps_pe"] = r.budget.eps_pe;
        row["eps_ec"] = r.budget.eps_ec;
        row["eps_pa"] = r.budget.eps_pa;
        row["eps_bar"] = r.budget.eps_bar;
        row["rate"] = r.key_rate();
        row["infeasible"] = r.infeasible;
        list.push_back(std::move(row));
    }
    return doc.dump(2) + "\n";
}

std::string render_gnuplot(const std::vector<rates::RatePoint>& rows) {
    std::string out;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        const bool new_block = i == 0 || r.attack != rows[i - 1].attack || r.qber != rows[i - 1].qber;
        if (new_block) {
            if (i > 0) out += "\n\n";
            out += "# protocol=";
            out += to_string(r.protocol.kind);
            out += " attack=";
            out += to_string(r.attack);
            out += " qber=" + format_number(r.qber) + "\n";
            out += "# N rate m_opt\n";
        }
        out += format_number(r.N) + ' ' + format_number(r.key_rate()) + ' ' + format_number(r.m) + '\n';
    }
    return out;
}

std::string render(const SweepRequest& request, const std::vector<rates::RatePoint>& rows) {
    switch (request.format) {
        case OutputFormat::Csv: return render_csv(rows);
        case OutputFormat::Json: return render_json(request, rows);
        case OutputFormat::Gnuplot: return render_gnuplot(rows);
    }
    return {};
}

void check_writable(const std::string& path) {
    if (path == "-") return;
    std::ofstream probe(path, std::ios::binary | std::ios::app);
    if (!probe) throw OutputError("cannot open " + path + " for writing");
}

void write_output(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::cout << text << std::flush;
        return;
    }
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw OutputError("cannot open " + path + " for writing");
    file << text;
    file.flush();
    if (!file) throw OutputError("failed writing " + path);
}

}  // namespace finikey::sweep
