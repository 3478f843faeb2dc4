#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "asmw/errors.hpp"

namespace asmw {

// Which part of a metafinite state a function belongs to. Primary functions
// map B1^n -> B1, secondary functions map B2^n -> B2, bridge functions map
// B1^n -> B2.
enum class FuncKind { Primary, Secondary, Bridge };

inline const char* to_string(FuncKind k) {
    switch (k) {
        case FuncKind::Primary: return "primary";
        case FuncKind::Secondary: return "secondary";
        case FuncKind::Bridge: return "bridge";
    }
    return "?";
}

struct FunctionDecl {
    std::string name;
    FuncKind kind = FuncKind::Primary;
    bool dynamic = false;
    int arity = 0;

    bool operator==(const FunctionDecl&) const = default;
};

// The two individual sorts of the term language.
enum class TermSort { Point, Algorithmic };

class Signature {
public:
    // Throws SortError on duplicate names, negative arity, or a dynamic
    // function whose arity is not 1 (updates are f(t) := s with one
    // argument slot; see repo docs).
    void add(const FunctionDecl& d) {
        if (index_.count(d.name))
            throw SortError("duplicate function name '" + d.name + "'");
        if (d.arity < 0) throw SortError("negative arity for '" + d.name + "'");
        if (d.dynamic && d.arity != 1)
            throw SortError("dynamic function '" + d.name + "' must have arity 1");
        index_.emplace(d.name, decls_.size());
        decls_.push_back(d);
    }

    const FunctionDecl* find(const std::string& name) const {
        auto it = index_.find(name);
        return it == index_.end() ? nullptr : &decls_[it->second];
    }

    const FunctionDecl& at(const std::string& name) const {
        const FunctionDecl* d = find(name);
        if (!d) throw SortError("unknown function '" + name + "'");
        return *d;
    }

    int index_of(const std::string& name) const {
        auto it = index_.find(name);
        if (it == index_.end()) throw SortError("unknown function '" + name + "'");
        return static_cast<int>(it->second);
    }

    const std::vector<FunctionDecl>& decls() const { return decls_; }
    const FunctionDecl& decl(int idx) const { return decls_[static_cast<size_t>(idx)]; }
    size_t size() const { return decls_.size(); }

    std::vector<std::string> dynamic_names() const {
        std::vector<std::string> out;
        for (const auto& d : decls_)
            if (d.dynamic) out.push_back(d.name);
        return out;
    }

    // Argument / value sorts implied by the function kind.
    static TermSort arg_sort(FuncKind k) {
        return k == FuncKind::Secondary ? TermSort::Algorithmic : TermSort::Point;
    }
    static TermSort value_sort(FuncKind k) {
        return k == FuncKind::Primary ? TermSort::Point : TermSort::Algorithmic;
    }

    // True if every function declared in `required` is present here with the
    // same kind, staticness and arity.
    bool extends(const Signature& required, std::string* why = nullptr) const {
        for (const auto& d : required.decls_) {
            const FunctionDecl* mine = find(d.name);
            if (!mine || !(*mine == d)) {
                if (why) *why = "function '" + d.name + "' missing or declared differently";
                return false;
            }
        }
        return true;
    }

    bool operator==(const Signature& o) const { return decls_ == o.decls_; }

private:
    std::vector<FunctionDecl> decls_;
    std::unordered_map<std::string, size_t> index_;
};

// A signature together with the atoms a rule/formula file declares as
// constants. States carry full carriers instead; this is the parse-time
// context for .asmr/.asml/.asmd files.
struct SigContext {
    Signature sig;
    // atom name -> sort of the carrier it names
    std::unordered_map<std::string, TermSort> atoms;

    void declare_atom(const std::string& name, TermSort sort) {
        auto [it, fresh] = atoms.emplace(name, sort);
        if (!fresh && it->second != sort)
            throw SortError("atom '" + name + "' declared in both carriers");
    }
    std::optional<TermSort> atom_sort(const std::string& name) const {
        auto it = atoms.find(name);
        if (it == atoms.end()) return std::nullopt;
        return it->second;
    }
};

}  // namespace asmw
