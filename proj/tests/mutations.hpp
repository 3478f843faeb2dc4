#pragma once

// Single-edit mutations of derivation files: flip a justification id, bump a
// premise index, permute premises, or negate the line's formula. Every
// mutant of a valid derivation must be rejected with a diagnostic naming the
// mutated line.

#include <string>
#include <vector>

#include "asmw/proof.hpp"

namespace testutil {

struct Mutant {
    asmw::Derivation derivation;
    int line = 0;  // the mutated line number
    std::string what;
};

inline std::vector<Mutant> mutate(const asmw::Derivation& d) {
    using asmw::Justification;
    static const std::vector<std::string> axiom_cycle = {
        "U1", "U2", "U3", "U4", "U5", "U6", "U7", "M1", "M4", "M5", "M6", "M7", "M8",
        "A1", "A2", "P1", "P2", "P3", "EQ1", "EQ2", "DY1", "E"};
    static const std::vector<std::string> rule_cycle = {"M2", "M3", "UI", "EG", "UG", "EI"};

    auto next_in = [](const std::vector<std::string>& cycle, const std::string& id) {
        for (size_t i = 0; i < cycle.size(); ++i)
            if (cycle[i] == id) return cycle[(i + 1) % cycle.size()];
        return cycle[0];
    };

    std::vector<Mutant> out;
    for (size_t i = 0; i < d.lines.size(); ++i) {
        const asmw::DerivationLine& line = d.lines[i];
        auto emit = [&](asmw::Derivation mutated, const std::string& what) {
            out.push_back(Mutant{std::move(mutated), line.number, what});
        };
        if (line.just.kind == Justification::Kind::Axiom) {
            asmw::Derivation m = d;
            m.lines[i].just.id = next_in(axiom_cycle, line.just.id);
            emit(std::move(m), "axiom id -> " + d.lines[i].just.id);
        }
        if (line.just.kind == Justification::Kind::Rule) {
            asmw::Derivation m = d;
            m.lines[i].just.id = next_in(rule_cycle, line.just.id);
            emit(std::move(m), "rule id -> " + d.lines[i].just.id);
            for (size_t p = 0; p < line.just.premises.size(); ++p) {
                asmw::Derivation bumped = d;
                bumped.lines[i].just.premises[p] += 1;
                emit(std::move(bumped), "premise +1");
            }
            if (line.just.premises.size() >= 2) {
                asmw::Derivation swapped = d;
                std::swap(swapped.lines[i].just.premises[0], swapped.lines[i].just.premises[1]);
                emit(std::move(swapped), "premises permuted");
            }
        }
        {
            asmw::Derivation m = d;
            m.lines[i].formula = asmw::f_not(line.formula);
            emit(std::move(m), "formula negated");
        }
    }
    return out;
}

}  // namespace testutil
