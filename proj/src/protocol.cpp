#include "finikey/protocol.hpp"

#include <cmath>
#include <string>

#include "finikey/errors.hpp"

namespace finikey {

void ProtocolSpec::validate() const {
    if (!(sifting_ratio > 0.0 && sifting_ratio <= 1.0)) {
        throw DomainError("sifting ratio must lie in (0, 1], got " + std::to_string(sifting_ratio));
    }
    if (!(ec_efficiency >= 1.0) || !std::isfinite(ec_efficiency)) {
        throw DomainError("error-correction efficiency must be >= 1, got " + std::to_string(ec_efficiency));
    }
    if (povm_outcomes != 2) {
        throw DomainError("parameter estimation uses a two-outcome QBER measurement");
    }
}

double ProtocolSpec::sifted_signals(double total_signals) const {
    return std::floor(sifting_ratio * total_signals);
}

std::string_view to_string(ProtocolKind kind) {
    switch (kind) {
        case ProtocolKind::BB84: return "bb84";
        case ProtocolKind::SixState: return "six-state";
    }
    return "?";
}

std::string_view to_string(ConstraintMode mode) {
    switch (mode) {
        case ConstraintMode::PerBasis: return "per-basis";
        case ConstraintMode::Symmetric: return "symmetric";
    }
    return "?";
}

std::string_view to_string(AttackModel model) {
    switch (model) {
        case AttackModel::Collective: return "collective";
        case AttackModel::Coherent: return "coherent";
        case AttackModel::PostSelection: return "postselection";
    }
    return "?";
}

std::string_view to_string(LeakCharge charge) {
    switch (charge) {
        case LeakCharge::WorstCase: return "worst-case";
        case LeakCharge::Observed: return "observed";
    }
    return "?";
}

std::optional<ProtocolKind> parse_protocol(std::string_view text) {
    if (text == "bb84" || text == "BB84") return ProtocolKind::BB84;
    if (text == "six-state" || text == "sixstate" || text == "six") return ProtocolKind::SixState;
    return std::nullopt;
}

std::optional<ConstraintMode> parse_constraint_mode(std::string_view text) {
    if (text == "per-basis") return ConstraintMode::PerBasis;
    if (text == "symmetric") return ConstraintMode::Symmetric;
    return std::nullopt;
}

std::optional<AttackModel> parse_attack_model(std::string_view text) {
    if (text == "collective" || text == "coll") return AttackModel::Collective;
    if (text == "coherent" || text == "coh") return AttackModel::Coherent;
    if (text == "postselection" || text == "post-selection" || text == "post") return AttackModel::PostSelection;
    return std::nullopt;
}

std::optional<LeakCharge> parse_leak_charge(std::string_view text) {
    if (text == "worst-case") return LeakCharge::WorstCase;
    if (text == "observed") return LeakCharge::Observed;
    return std::nullopt;
}

}  // namespace finikey
