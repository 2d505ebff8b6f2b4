#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <sstream>

#include <nlohmann/json.hpp>

#include "finikey/errors.hpp"
#include "finikey/sweep.hpp"

using namespace finikey;
using namespace finikey::sweep;

namespace {

SweepRequest small_request() {
    SweepRequest r;
    r.protocol.sifting_ratio = 0.5;
    r.models = {AttackModel::PostSelection, AttackModel::Collective};
    r.qbers = {0.05, 0.01};
    r.n_values = {1e6, 1e5};
    return r;
}

int count_lines(const std::string& s) {
    return static_cast<int>(std::count(s.begin(), s.end(), '\n'));
}

}  // namespace

TEST(Sweep, Validation) {
    SweepRequest r = small_request();
    r.n_values = {50.0};
    EXPECT_THROW(r.validate(), DomainError);
    r.n_values = {1e17};
    EXPECT_THROW(r.validate(), DomainError);
    r = small_request();
    r.n_values.clear();
    r.count = 10001;
    EXPECT_THROW(r.validate(), DomainError);
    r.count = 5;
    r.n_min = 1e8;
    r.n_max = 1e6;
    EXPECT_THROW(r.validate(), DomainError);
    r = small_request();
    r.models.clear();
    EXPECT_THROW(r.validate(), DomainError);
}

TEST(Sweep, SignalCounts) {
    SweepRequest r;
    r.n_min = 1e4;
    r.n_max = 1e12;
    r.count = 9;
    const auto n = r.signal_counts();
    ASSERT_EQ(n.size(), 9u);
    EXPECT_EQ(n.front(), 1e4);
    EXPECT_EQ(n[4], 1e8);
    EXPECT_EQ(n.back(), 1e12);
}

TEST(Sweep, RowOrderAndThreadIndependence) {
    const SweepRequest r = small_request();
    const auto one = run_sweep(r, 1);
    const auto three = run_sweep(r, 3);
    ASSERT_EQ(one.size(), 8u);
    EXPECT_EQ(one[0].attack, AttackModel::Collective);
    EXPECT_EQ(one[0].qber, 0.05);
    EXPECT_EQ(one[0].N, 1e5);
    EXPECT_EQ(one[1].N, 1e6);
    EXPECT_EQ(one[2].qber, 0.01);
    EXPECT_EQ(one[4].attack, AttackModel::PostSelection);
    EXPECT_EQ(render_csv(one), render_csv(three));
}

TEST(Sweep, CsvFormat) {
    const auto rows = run_sweep(small_request(), 2);
    const std::string csv = render_csv(rows);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "protocol,attack,N,qber,m_opt,eps_pe,eps_ec,eps_pa,eps_bar,rate");
    EXPECT_EQ(count_lines(csv), 9);
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);
    while (std::getline(lines, line)) {
        EXPECT_EQ(std::count(line.begin(), line.end(), ','), 9);
        const double rate = std::stod(line.substr(line.rfind(',') + 1));
        EXPECT_GE(rate, 0.0);
        EXPECT_LE(rate, 1.0);
    }
}

TEST(Sweep, NumberFormatting) {
    EXPECT_EQ(format_number(0.0), "0");
    EXPECT_EQ(format_number(1e6), "1000000");
    EXPECT_EQ(format_number(1e14), "1e+14");
    EXPECT_EQ(format_number(0.123456789123), "0.123456789");
    EXPECT_EQ(format_number(2.5e-10), "2.5e-10");
}

TEST(Sweep, GnuplotBlocks) {
    const auto rows = run_sweep(small_request(), 1);
    const std::string text = render_gnuplot(rows);
    std::size_t headers = 0;
    for (std::size_t pos = 0; (pos = text.find("# protocol=", pos)) != std::string::npos; ++pos) ++headers;
    EXPECT_EQ(headers, 4u);
    std::size_t separators = 0;
    for (std::size_t pos = 0; (pos = text.find("\n\n\n", pos)) != std::string::npos; ++pos) ++separators;
    EXPECT_EQ(separators, 3u);
}

TEST(Sweep, JsonFormat) {
    const SweepRequest r = small_request();
    const auto doc = nlohmann::json::parse(render_json(r, run_sweep(r, 1)));
    EXPECT_EQ(doc["protocol"], "bb84");
    ASSERT_EQ(doc["rows"].size(), 8u);
    EXPECT_EQ(doc["rows"][0]["attack"], "collective");
    EXPECT_GE(doc["rows"][0]["rate"].get<double>(), 0.0);
}

TEST(Sweep, ThreadCountFromEnvironment) {
    setenv("FINIKEY_THREADS", "3", 1);
    EXPECT_EQ(thread_count_from_env(), 3u);
    setenv("FINIKEY_THREADS", "zero", 1);
    EXPECT_GE(thread_count_from_env(), 1u);
    unsetenv("FINIKEY_THREADS");
}

TEST(Sweep, LogGridOrdering) {
    SweepRequest r;
    r.protocol.sifting_ratio = 0.5;
    r.qbers = {0.01, 0.1};
    r.n_min = 1e4;
    r.n_max = 1e12;
    r.count = 5;
    const auto rows = run_sweep(r, thread_count_from_env());
    ASSERT_EQ(rows.size(), 30u);
    const std::size_t block = 10;  // qbers x N per model
    for (std::size_t i = 0; i < block; ++i) {
        const double coll = rows[i].key_rate();
        EXPECT_GE(coll, rows[block + i].key_rate()) << rows[i].qber << ' ' << rows[i].N;
        EXPECT_GE(coll, rows[2 * block + i].key_rate()) << rows[i].qber << ' ' << rows[i].N;
    }
}

TEST(Sweep, UnwritablePath) {
    EXPECT_THROW(write_output("/nonexistent-dir/out.csv", "x"), OutputError);
    EXPECT_THROW(check_writable("/nonexistent-dir/out.csv"), OutputError);
}
