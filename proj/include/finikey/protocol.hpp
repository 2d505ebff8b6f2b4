#pragma once

#include <optional>
#include <string_view>

namespace finikey {

enum class ProtocolKind { BB84, SixState };

/// How the observed QBER constrains the per-basis error rates of Eve's state.
///  - PerBasis: every monitored basis error rate lies independently in
///    [Q - w, Q + w].
///  - Symmetric: all monitored bases share one error rate e in [Q - w, Q + w].
enum class ConstraintMode { PerBasis, Symmetric };

enum class AttackModel { Collective, Coherent, PostSelection };

/// Which QBER the error-correction leakage n f h(QBER) is charged at.
///  - WorstCase: inside the infimum, at the Z error rate of each candidate
///    state (H(X|Y) = h(e_z) for Bell-diagonal states).
///  - Observed: at the measured Q_m, outside the infimum.
enum class LeakCharge { WorstCase, Observed };

struct ProtocolSpec {
    ProtocolKind kind = ProtocolKind::BB84;
    double sifting_ratio = 1.0;   // N_s / N
    double ec_efficiency = 1.1;   // f in leak_EC = n f h(Q) + log2(2/eps_EC)
    int povm_outcomes = 2;
    ConstraintMode constraint_mode = ConstraintMode::PerBasis;
    LeakCharge leak_charge = LeakCharge::WorstCase;

    /// Throws DomainError if any field is out of range.
    void validate() const;

    /// Sifted signal count floor(sifting_ratio * N).
    double sifted_signals(double total_signals) const;
};

std::string_view to_string(ProtocolKind kind);
std::string_view to_string(ConstraintMode mode);
std::string_view to_string(AttackModel model);
std::string_view to_string(LeakCharge charge);

std::optional<ProtocolKind> parse_protocol(std::string_view text);
std::optional<ConstraintMode> parse_constraint_mode(std::string_view text);
std::optional<AttackModel> parse_attack_model(std::string_view text);
std::optional<LeakCharge> parse_leak_charge(std::string_view text);

/// Number of bases whose error rate is monitored: 2 for BB84, 3 for six-state.
inline int monitored_bases(ProtocolKind kind) { return kind == ProtocolKind::BB84 ? 2 : 3; }

/// Fraction of signals kept when bases are chosen uniformly: 1/2 for BB84,
/// 1/3 for six-state. The CLI uses this unless --sifting-ratio is given.
inline double natural_sifting_ratio(ProtocolKind kind) { return kind == ProtocolKind::BB84 ? 0.5 : 1.0 / 3.0; }

}  // namespace finikey
