#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "diagnostics.hpp"

namespace pvs {

enum class SortKind { Real, Int, Uninterp };

struct Sort {
    std::string name;
    SortKind kind = SortKind::Real;

    bool numeric() const { return kind != SortKind::Uninterp; }
    bool operator==(const Sort& o) const { return name == o.name; }
    bool operator!=(const Sort& o) const { return name != o.name; }
    bool operator<(const Sort& o) const { return name < o.name; }
};

inline Sort real_sort() { return Sort{"real", SortKind::Real}; }
inline Sort int_sort() { return Sort{"int", SortKind::Int}; }

struct FuncDecl {
    std::string name;
    std::vector<Sort> args;
    Sort result;
    // 0 = base signature; 1.. = extension level the symbol belongs to.
    int level = 0;
    bool is_param = false;
    // nonempty for primed copies: the unprimed original.
    std::string primed_of;
    bool is_fresh = false;  // Skolem / purification constant

    bool is_constant() const { return args.empty(); }
};

struct PredDecl {
    std::string name;
    std::vector<Sort> args;
};

// Many-sorted signature with the partition data the engine needs:
// base symbols (level 0), extension levels, parameters, primed copies and
// fresh constants introduced by Skolemization/purification.
class Signature {
public:
    Signature() {
        sorts_["real"] = real_sort();
        sorts_["int"] = int_sort();
    }

    const Sort& add_sort(const std::string& name, SortKind kind) {
        auto it = sorts_.find(name);
        if (it != sorts_.end()) {
            if (it->second.kind != kind) throw InputError("sort redeclared with different kind: " + name);
            return it->second;
        }
        return sorts_.emplace(name, Sort{name, kind}).first->second;
    }

    const Sort* find_sort(const std::string& name) const {
        auto it = sorts_.find(name);
        return it == sorts_.end() ? nullptr : &it->second;
    }

    FuncDecl& declare(const FuncDecl& d) {
        auto it = funcs_.find(d.name);
        if (it != funcs_.end()) throw InputError("duplicate declaration of symbol: " + d.name);
        return funcs_.emplace(d.name, d).first->second;
    }

    void declare_pred(const PredDecl& d) {
        if (preds_.count(d.name)) throw InputError("duplicate declaration of predicate: " + d.name);
        preds_.emplace(d.name, d);
    }

    const FuncDecl* find(const std::string& name) const {
        auto it = funcs_.find(name);
        return it == funcs_.end() ? nullptr : &it->second;
    }

    FuncDecl* find_mut(const std::string& name) {
        auto it = funcs_.find(name);
        return it == funcs_.end() ? nullptr : &it->second;
    }

    const PredDecl* find_pred(const std::string& name) const {
        auto it = preds_.find(name);
        return it == preds_.end() ? nullptr : &it->second;
    }

    // Deterministic fresh names: base name plus a per-base counter, skipping
    // anything already declared.
    std::string fresh_name(const std::string& base) {
        int& n = fresh_counters_[base];
        while (true) {
            std::string cand = base + std::to_string(n);
            ++n;
            if (!funcs_.count(cand) && !preds_.count(cand)) return cand;
        }
    }

    FuncDecl& declare_fresh_constant(const std::string& base, const Sort& sort) {
        FuncDecl d;
        d.name = fresh_name(base);
        d.result = sort;
        d.is_fresh = true;
        return declare(d);
    }

    const std::map<std::string, FuncDecl>& functions() const { return funcs_; }
    const std::map<std::string, Sort>& sorts() const { return sorts_; }

    std::set<std::string> symbols_at_level(int level) const {
        std::set<std::string> out;
        for (auto& [n, d] : funcs_)
            if (d.level == level) out.insert(n);
        return out;
    }

    int max_level() const {
        int m = 0;
        for (auto& [n, d] : funcs_) m = std::max(m, d.level);
        return m;
    }

private:
    std::map<std::string, Sort> sorts_;
    std::map<std::string, FuncDecl> funcs_;
    std::map<std::string, PredDecl> preds_;
    std::map<std::string, int> fresh_counters_;
};

}  // namespace pvs
