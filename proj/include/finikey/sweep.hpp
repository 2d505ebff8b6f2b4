#pragma once

// N-sweeps of the optimized rates and their CSV / JSON / gnuplot renderings.

#include <optional>
#include <stdexcept>
#include <string_view>
#include <string>
#include <vector>

#include "finikey/optimizer.hpp"
#include "finikey/protocol.hpp"
#include "finikey/rates.hpp"

namespace finikey::sweep {

enum class OutputFormat { Csv, Json, Gnuplot };

std::optional<OutputFormat> parse_output_format(std::string_view text);

/// The output file could not be opened or written.
class OutputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SweepRequest {
    ProtocolSpec protocol;
    std::vector<AttackModel> models{AttackModel::Collective, AttackModel::Coherent, AttackModel::PostSelection};
    std::vector<double> qbers;
    /// Either an explicit list (n_values) or a log-spaced range.
    std::vector<double> n_values;
    double n_min = 1e4;
    double n_max = 1e12;
    int count = 9;
    double eps_total = 1e-9;
    OutputFormat format = OutputFormat::Csv;
    std::string output_path = "-";
    int m_grid_density = 32;
    int eps_grid_density = 8;
    int refine_iterations = 200;

    /// Throws DomainError: N outside [1e2, 1e16], more than 1e4 N values,
    /// empty model or qber list.
    void validate() const;

    /// Explicit list, or count log-spaced points rounded to integers.
    std::vector<double> signal_counts() const;

    /// Models deduplicated, in the order collective, coherent, postselection.
    std::vector<AttackModel> canonical_models() const;
};

/// Rows ordered by model (canonical), qber (as given), then N ascending.
/// Points run on `threads` workers; the result does not depend on it.
std::vector<rates::RatePoint> run_sweep(const SweepRequest& request, unsigned threads);

/// FINIKEY_THREADS if set to a positive integer, otherwise the hardware
/// concurrency (at least 1).
unsigned thread_count_from_env();

/// printf("%.9g") without the locale: 9 significant digits, '.' decimal.
std::string format_number(double value);

std::string render_csv(const std::vector<rates::RatePoint>& rows);
std::string render_json(const SweepRequest& request, const std::vector<rates::RatePoint>& rows);
std::string render_gnuplot(const std::vector<rates::RatePoint>& rows);
std::string render(const SweepRequest& request, const std::vector<rates::RatePoint>& rows);

/// Throws OutputError unless path is "-" or can be opened for writing. Creates
/// the file if missing; existing content is left alone.
void check_writable(const std::string& path);

/// Writes to output_path ("-" is stdout). Throws OutputError.
void write_output(const std::string& path, const std::string& text);

}  // namespace finikey::sweep
