#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "asmw/state.hpp"

namespace asmw {

// One update (f, (a), b): function index in the state's signature, argument
// value and new value. Dynamic functions have arity 1, so the argument tuple
// is a single value.
struct Update {
    int fn = 0;
    Value arg = 0;
    Value value = 0;

    auto operator<=>(const Update&) const = default;
    bool same_location(const Update& o) const { return fn == o.fn && arg == o.arg; }
};

// A finite set of updates, kept sorted and deduplicated.
class UpdateSet {
public:
    UpdateSet() = default;
    explicit UpdateSet(std::vector<Update> items) : items_(std::move(items)) { normalize(); }

    static UpdateSet empty() { return UpdateSet{}; }
    static UpdateSet single(Update u) { return UpdateSet{{u}}; }

    void insert(Update u) {
        auto it = std::lower_bound(items_.begin(), items_.end(), u);
        if (it == items_.end() || *it != u) items_.insert(it, u);
    }
    void erase(const Update& u) {
        auto it = std::lower_bound(items_.begin(), items_.end(), u);
        if (it != items_.end() && *it == u) items_.erase(it);
    }

    bool contains(const Update& u) const {
        return std::binary_search(items_.begin(), items_.end(), u);
    }

    size_t size() const { return items_.size(); }
    bool is_empty() const { return items_.empty(); }
    auto begin() const { return items_.begin(); }
    auto end() const { return items_.end(); }
    const std::vector<Update>& items() const { return items_; }

    auto operator<=>(const UpdateSet&) const = default;

    friend UpdateSet set_union(const UpdateSet& a, const UpdateSet& b) {
        std::vector<Update> out;
        out.reserve(a.items_.size() + b.items_.size());
        std::set_union(a.items_.begin(), a.items_.end(), b.items_.begin(), b.items_.end(),
                       std::back_inserter(out));
        return UpdateSet::from_sorted(std::move(out));
    }

    static UpdateSet from_sorted(std::vector<Update> items) {
        UpdateSet s;
        s.items_ = std::move(items);
        return s;
    }

private:
    void normalize() {
        std::sort(items_.begin(), items_.end());
        items_.erase(std::unique(items_.begin(), items_.end()), items_.end());
    }
    std::vector<Update> items_;
};

// No two updates to the same location with distinct values.
inline bool is_consistent(const UpdateSet& u) {
    const auto& v = u.items();
    for (size_t i = 1; i < v.size(); ++i)
        if (v[i].same_location(v[i - 1])) return false;  // values differ since deduplicated
    return true;
}

// d1 ⊘ d2: d2 plus the d1-updates whose locations d2 leaves untouched.
inline UpdateSet seq_merge(const UpdateSet& d1, const UpdateSet& d2) {
    std::vector<Update> out(d2.begin(), d2.end());
    for (const Update& u : d1) {
        bool clobbered = false;
        for (const Update& w : d2)
            if (u.same_location(w)) {
                clobbered = true;
                break;
            }
        if (!clobbered) out.push_back(u);
    }
    return UpdateSet(std::move(out));
}

// The value of Delta(r,S,zeta): a set of update sets, deduplicated by set
// equality and kept in canonical order.
class UpdateSetFamily {
public:
    UpdateSetFamily() = default;
    explicit UpdateSetFamily(std::vector<UpdateSet> sets) : sets_(std::move(sets)) { normalize(); }

    void add(UpdateSet s) { sets_.push_back(std::move(s)); dirty_ = true; }
    void finish() { if (dirty_) normalize(); }

    size_t size() const { return sets_.size(); }
    bool is_empty() const { return sets_.empty(); }
    auto begin() const { return sets_.begin(); }
    auto end() const { return sets_.end(); }
    const std::vector<UpdateSet>& sets() const { return sets_; }

    bool contains(const UpdateSet& s) const {
        return std::binary_search(sets_.begin(), sets_.end(), s);
    }

    bool operator==(const UpdateSetFamily& o) const { return sets_ == o.sets_; }

private:
    void normalize() {
        std::sort(sets_.begin(), sets_.end());
        sets_.erase(std::unique(sets_.begin(), sets_.end()), sets_.end());
        dirty_ = false;
    }
    std::vector<UpdateSet> sets_;
    bool dirty_ = false;
};

// Branch-tagged update quadruples: the values of second-predicate-sort
// variables. Tags live in B1.
struct TaggedUpdate {
    int fn = 0;
    Value arg = 0;
    Value value = 0;
    Value tag = 0;

    auto operator<=>(const TaggedUpdate&) const = default;
};

class TaggedUpdateSet {
public:
    TaggedUpdateSet() = default;
    explicit TaggedUpdateSet(std::vector<TaggedUpdate> items) : items_(std::move(items)) {
        std::sort(items_.begin(), items_.end());
        items_.erase(std::unique(items_.begin(), items_.end()), items_.end());
    }

    bool contains(const TaggedUpdate& u) const {
        return std::binary_search(items_.begin(), items_.end(), u);
    }
    void insert(TaggedUpdate u) {
        auto it = std::lower_bound(items_.begin(), items_.end(), u);
        if (it == items_.end() || *it != u) items_.insert(it, u);
    }
    void erase(const TaggedUpdate& u) {
        auto it = std::lower_bound(items_.begin(), items_.end(), u);
        if (it != items_.end() && *it == u) items_.erase(it);
    }
    UpdateSet project_tag(Value tag) const {
        std::vector<Update> out;
        for (const auto& q : items_)
            if (q.tag == tag) out.push_back(Update{q.fn, q.arg, q.value});
        return UpdateSet(std::move(out));
    }

    size_t size() const { return items_.size(); }
    auto begin() const { return items_.begin(); }
    auto end() const { return items_.end(); }
    const std::vector<TaggedUpdate>& items() const { return items_; }

    auto operator<=>(const TaggedUpdateSet&) const = default;

private:
    std::vector<TaggedUpdate> items_;
};

// An update is well-kinded when its argument and value lie in the carriers
// the function's kind prescribes.
inline bool is_well_kinded(const State& s, const Update& u) {
    if (u.fn < 0 || static_cast<size_t>(u.fn) >= s.sig().size()) return false;
    const FunctionDecl& d = s.sig().decl(u.fn);
    if (!d.dynamic) return false;
    return s.carriers().in_sort(u.arg, Signature::arg_sort(d.kind)) &&
           s.carriers().in_sort(u.value, Signature::value_sort(d.kind));
}

inline bool is_applicable(const State& s, const UpdateSet& u) {
    if (!is_consistent(u)) return false;
    for (const Update& up : u)
        if (!is_well_kinded(s, up)) return false;
    return true;
}

inline State apply_unchecked(const State& s, const UpdateSet& u) {
    State next = s;
    for (const Update& up : u) next.set(up.fn, {up.arg}, up.value);
    return next;
}

// Successor state S + u. Requires a consistent, well-kinded update set.
inline State apply(const State& s, const UpdateSet& u) {
    if (!is_consistent(u)) throw InconsistentUpdateSet("update set is inconsistent");
    for (const Update& up : u)
        if (!is_well_kinded(s, up))
            throw InconsistentUpdateSet("update set contains an ill-kinded update");
    return apply_unchecked(s, u);
}

}  // namespace asmw
