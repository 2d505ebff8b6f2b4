#include "finikey/optimizer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "finikey/errors.hpp"

namespace finikey::opt {

namespace {

constexpr double kLowestShare = 1e-3;
constexpr double kMinGain = 1e-12;
constexpr double kMinLogStep = 1e-7;

// Shares of eps_total held by (pe, pa, bar) after weighting; ec gets the rest.
struct Allocation {
    double m;
    std::array<double, 3> shares;
};

class Search {
public:
    explicit Search(const OptimizationSpec& spec)
        : spec_(spec),
          sifted_(spec.protocol.sifted_signals(spec.N)),
          bar_weight_(spec.model == AttackModel::Coherent ? 2.0 : 1.0) {}

    double sifted() const { return sifted_; }

    std::optional<rates::SecurityBudget> budget(const std::array<double, 3>& shares) const {
        const double used = shares[0] + shares[1] + shares[2];
        if (!(used < 1.0)) return std::nullopt;
        const double total = spec_.eps_total;
        rates::SecurityBudget b;
        b.eps_pe = shares[0] * total;
        b.eps_pa = shares[1] * total;
        b.eps_bar = shares[2] * total / bar_weight_;
        b.eps_ec = total - b.eps_pe - b.eps_pa - bar_weight_ * b.eps_bar;
        if (!(b.eps_ec > 0.0)) return std::nullopt;
        return b;
    }

    std::optional<rates::RatePoint> evaluate(const Allocation& a) const {
        if (a.m < 1.0 || a.m > sifted_ - 1.0) return std::nullopt;
        const auto b = budget(a.shares);
        if (!b) return std::nullopt;
        if (spec_.model != AttackModel::Coherent && !(b->eps_pe > 0.0)) return std::nullopt;
        return rates::evaluate_rate(spec_.model, spec_.protocol, spec_.N, a.m, spec_.qber, *b);
    }

private:
    const OptimizationSpec& spec_;
    double sifted_;
    double bar_weight_;
};

struct Candidate {
    Allocation allocation;
    rates::RatePoint point;
};

// Total order: rate descending, then m ascending, then components ascending.
bool better(const rates::RatePoint& a, const rates::RatePoint& b) {
    if (a.rate != b.rate) return a.rate > b.rate;
    const auto key = [](const rates::RatePoint& p) {
        return std::make_tuple(p.m, p.budget.eps_pe, p.budget.eps_ec, p.budget.eps_pa, p.budget.eps_bar);
    };
    return key(a) < key(b);
}

std::vector<double> share_grid(int density) {
    std::vector<double> grid;
    const double lo = std::log(kLowestShare);
    for (int k = 0; k < density; ++k) grid.push_back(std::exp(lo - lo * k / (density - 1)));
    return grid;
}

std::vector<double> m_grid(double sifted, int density) {
    std::vector<double> grid;
    const double lo = 0.0;  // ln 1
    const double hi = std::log(sifted - 1.0);
    for (int k = 0; k < density; ++k) {
        const double t = density == 1 ? 0.0 : static_cast<double>(k) / (density - 1);
        const double m = std::clamp(std::round(std::exp(lo + (hi - lo) * t)), 1.0, sifted - 1.0);
        if (grid.empty() || m != grid.back()) grid.push_back(m);
    }
    return grid;
}

}  // namespace

void OptimizationSpec::validate() const {
    protocol.validate();
    if (!(eps_total > 0.0 && eps_total < 1.0)) throw DomainError("eps_total must lie in (0, 1)");
    if (!std::isfinite(N) || protocol.sifted_signals(N) < 2.0) {
        throw DomainError("N must be finite and leave at least 2 sifted signals");
    }
    if (!(qber >= 0.0 && qber <= 0.5)) throw DomainError("QBER must lie in [0, 1/2]");
    if (m_grid_density < 8 || eps_grid_density < 8) throw DomainError("grid densities must be >= 8");
    if (refine_iterations < 0) throw DomainError("refine_iterations must be >= 0");
}

rates::RatePoint optimize_rate(const OptimizationSpec& spec) {
    spec.validate();
    const Search search(spec);

    std::vector<double> pe_values = share_grid(spec.eps_grid_density);
    if (spec.model == AttackModel::Coherent) pe_values.insert(pe_values.begin(), 0.0);
    const std::vector<double> shares = share_grid(spec.eps_grid_density);

    std::optional<Candidate> best;
    for (double m : m_grid(search.sifted(), spec.m_grid_density)) {
        for (double pe : pe_values) {
            for (double pa : shares) {
                for (double bar : shares) {
                    const Allocation a{m, {pe, pa, bar}};
                    auto point = search.evaluate(a);
                    if (point && (!best || better(*point, best->point))) best = Candidate{a, std::move(*point)};
                }
            }
        }
    }
    if (!best) throw DomainError("no admissible point on the optimization grid");

    // Coordinate descent in log space. Coordinate 0 is m, 1..3 the shares;
    // a zero share (coherent eps_pe) stays zero.
    const double m_span = std::log(std::max(search.sifted() - 1.0, 1.0));
    std::array<double, 4> step{
        std::max(m_span / (spec.m_grid_density - 1), kMinLogStep),
        -std::log(kLowestShare) / (spec.eps_grid_density - 1),
        -std::log(kLowestShare) / (spec.eps_grid_density - 1),
        -std::log(kLowestShare) / (spec.eps_grid_density - 1),
    };
    for (int pass = 0; pass < spec.refine_iterations; ++pass) {
        const double before = best->point.rate;
        for (int c = 0; c < 4; ++c) {
            for (double direction : {1.0, -1.0}) {
                Allocation a = best->allocation;
                if (c == 0) {
                    a.m = std::clamp(std::round(a.m * std::exp(direction * step[0])), 1.0, search.sifted() - 1.0);
                    if (a.m == best->allocation.m) continue;
                } else {
                    double& share = a.shares[c - 1];
                    if (share <= 0.0) continue;
                    share *= std::exp(direction * step[c]);
                }
                auto point = search.evaluate(a);
                if (point && point->rate > best->point.rate) best = Candidate{a, std::move(*point)};
            }
        }
        if (best->point.rate - before < kMinGain) {
            for (double& s : step) s *= 0.5;
            if (*std::max_element(step.begin(), step.end()) < kMinLogStep) break;
        }
    }

    rates::RatePoint result = std::move(best->point);
    if (result.rate <= 0.0 && result.diagnostic.empty()) {
        result.diagnostic = "no positive key rate found";
    }
    return result;
}

}  // namespace finikey::opt
