#pragma once

#include <optional>
#include <string>
#include <vector>

#include "asmw/ast.hpp"
#include "asmw/schemas.hpp"

namespace asmw {

// Semantic certificate for UG/EI side conditions and for schema E's rule
// equivalence hypothesis: either a finite family of state files over which
// the evaluator verifies the condition exhaustively, or `axiomatic`, which
// downgrades the overall result to ok-modulo-certificates.
struct Certificate {
    enum class Kind { None, Axiomatic, States };
    Kind kind = Kind::None;
    std::vector<std::string> state_files;
};

struct Justification {
    enum class Kind { Hypothesis, Axiom, Rule };
    Kind kind = Kind::Hypothesis;
    std::string id;             // schema or inference-rule id
    std::vector<int> premises;  // 1-based line numbers
    Instantiation inst;
    Certificate cert;
};

struct DerivationLine {
    int number = 0;
    Formula formula;
    Justification just;
};

struct Derivation {
    SigContext ctx;
    std::vector<Formula> hypotheses;
    std::vector<DerivationLine> lines;
};

struct LineError {
    int line = 0;
    std::string reason;
};

struct CheckResult {
    enum class Status { Ok, OkModuloCertificates, Rejected };
    Status status = Status::Ok;
    std::optional<LineError> error;

    bool ok() const { return status != Status::Rejected; }
};

struct CheckContext {
    // States used to discharge finite-scope certificates, keyed by file name
    // as written in the derivation.
    std::vector<std::pair<std::string, State>> certificate_states;
    Caps caps;
};

CheckResult check(const Derivation& d, const CheckContext& ctx);

}  // namespace asmw
