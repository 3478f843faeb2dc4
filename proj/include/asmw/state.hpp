#pragma once

#include <cstdint>
#include <memory>
#include <numeric>
#include <string>
#include <unordered_map>
#include <vector>

#include "asmw/errors.hpp"
#include "asmw/signature.hpp"

namespace asmw {

using Value = uint32_t;
inline constexpr Value kNoValue = ~Value{0};

// The carriers of a metafinite state: a finite ordered primary carrier B1
// (which always contains the atoms `true` and `false`) and a finite ordered
// secondary carrier B2. Atom ids: primary atoms are 0..P-1 in declaration
// order, secondary atoms P..P+S-1. Shared immutably between a state and all
// its successors.
class Carriers {
public:
    Carriers(std::vector<std::string> primary, std::vector<std::string> secondary) {
        primary_count_ = primary.size();
        atoms_ = std::move(primary);
        atoms_.insert(atoms_.end(), secondary.begin(), secondary.end());
        for (size_t i = 0; i < atoms_.size(); ++i) {
            auto [it, fresh] = by_name_.emplace(atoms_[i], static_cast<Value>(i));
            if (!fresh)
                throw InputError("atom '" + atoms_[i] + "' listed twice (carriers must be disjoint)");
        }
        if (primary_count_ == 0) throw InputError("primary carrier is empty");
        if (primary_count_ == atoms_.size()) throw InputError("secondary carrier is empty");
        true_ = id("true");
        false_ = id("false");
        if (true_ == kNoValue || false_ == kNoValue || !is_primary(true_) || !is_primary(false_))
            throw InputError("primary carrier must contain the atoms 'true' and 'false'");
    }

    Value id(const std::string& name) const {
        auto it = by_name_.find(name);
        return it == by_name_.end() ? kNoValue : it->second;
    }
    const std::string& name(Value v) const { return atoms_[v]; }

    size_t primary_count() const { return primary_count_; }
    size_t secondary_count() const { return atoms_.size() - primary_count_; }
    size_t total() const { return atoms_.size(); }

    bool is_primary(Value v) const { return v < primary_count_; }
    bool is_secondary(Value v) const { return v >= primary_count_ && v < atoms_.size(); }
    bool in_sort(Value v, TermSort s) const {
        return s == TermSort::Point ? is_primary(v) : is_secondary(v);
    }

    Value true_value() const { return true_; }
    Value false_value() const { return false_; }

    std::vector<Value> values_of(TermSort s) const {
        std::vector<Value> out;
        if (s == TermSort::Point) {
            out.resize(primary_count_);
            std::iota(out.begin(), out.end(), Value{0});
        } else {
            out.resize(secondary_count());
            std::iota(out.begin(), out.end(), static_cast<Value>(primary_count_));
        }
        return out;
    }

    size_t sort_size(TermSort s) const {
        return s == TermSort::Point ? primary_count_ : secondary_count();
    }

    // Index of a value within its carrier (for function-table addressing).
    size_t ordinal(Value v) const { return is_primary(v) ? v : v - primary_count_; }

private:
    std::vector<std::string> atoms_;
    size_t primary_count_ = 0;
    std::unordered_map<std::string, Value> by_name_;
    Value true_ = kNoValue, false_ = kNoValue;
};

// Total interpretation of one function as a dense table over its domain.
struct FunctionTable {
    std::vector<Value> data;  // row-major over the argument carrier
};

class UpdateSet;

// A metafinite state: shared signature + carriers, per-function tables.
// Immutable in use; `apply` (updates.hpp) builds successors sharing the
// untouched tables.
class State {
public:
    State(std::shared_ptr<const Signature> sig, std::shared_ptr<const Carriers> carriers)
        : sig_(std::move(sig)), carriers_(std::move(carriers)) {
        tables_.resize(sig_->size());
        for (size_t i = 0; i < sig_->size(); ++i) {
            const FunctionDecl& d = sig_->decl(static_cast<int>(i));
            size_t dom = carriers_->sort_size(Signature::arg_sort(d.kind));
            size_t n = 1;
            for (int a = 0; a < d.arity; ++a) n *= dom;
            auto t = std::make_shared<FunctionTable>();
            t->data.assign(n, kNoValue);
            tables_[i] = std::move(t);
        }
    }

    const Signature& sig() const { return *sig_; }
    std::shared_ptr<const Signature> sig_ptr() const { return sig_; }
    const Carriers& carriers() const { return *carriers_; }
    std::shared_ptr<const Carriers> carriers_ptr() const { return carriers_; }

    size_t table_index(int fn, const std::vector<Value>& args) const {
        const FunctionDecl& d = sig_->decl(fn);
        size_t dom = carriers_->sort_size(Signature::arg_sort(d.kind));
        size_t idx = 0;
        for (Value a : args) idx = idx * dom + carriers_->ordinal(a);
        return idx;
    }

    Value lookup(int fn, const std::vector<Value>& args) const {
        return tables_[static_cast<size_t>(fn)]->data[table_index(fn, args)];
    }
    Value lookup1(int fn, Value arg) const {
        return tables_[static_cast<size_t>(fn)]->data[carriers_->ordinal(arg)];
    }
    Value lookup0(int fn) const { return tables_[static_cast<size_t>(fn)]->data[0]; }

    // Construction-time mutation only.
    void set(int fn, const std::vector<Value>& args, Value v) {
        mutable_table(fn).data[table_index(fn, args)] = v;
    }
    void fill_default(int fn, Value v) {
        auto& t = mutable_table(fn);
        for (auto& x : t.data)
            if (x == kNoValue) x = v;
    }
    void validate_total() const {
        for (size_t i = 0; i < tables_.size(); ++i)
            for (Value v : tables_[i]->data)
                if (v == kNoValue)
                    throw InputError("function '" + sig_->decl(static_cast<int>(i)).name +
                                     "' is not total");
    }

    const FunctionTable& table(int fn) const { return *tables_[static_cast<size_t>(fn)]; }

    // Extensional equality of the dynamic-function graphs. Static parts are
    // shared by construction across successors.
    bool same_dynamics(const State& o) const {
        for (size_t i = 0; i < tables_.size(); ++i) {
            if (!sig_->decl(static_cast<int>(i)).dynamic) continue;
            if (tables_[i] == o.tables_[i]) continue;
            if (tables_[i]->data != o.tables_[i]->data) return false;
        }
        return true;
    }

    size_t dynamics_hash() const {
        size_t h = 1469598103934665603ull;
        for (size_t i = 0; i < tables_.size(); ++i) {
            if (!sig_->decl(static_cast<int>(i)).dynamic) continue;
            for (Value v : tables_[i]->data) {
                h ^= v;
                h *= 1099511628211ull;
            }
        }
        return h;
    }

    friend State apply_unchecked(const State& s, const UpdateSet& u);

private:
    FunctionTable& mutable_table(int fn) {
        auto& slot = tables_[static_cast<size_t>(fn)];
        if (slot.use_count() != 1) slot = std::make_shared<FunctionTable>(*slot);
        return const_cast<FunctionTable&>(*slot);
    }

    std::shared_ptr<const Signature> sig_;
    std::shared_ptr<const Carriers> carriers_;
    std::vector<std::shared_ptr<const FunctionTable>> tables_;
};

}  // namespace asmw
