#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "wald/fincat.hpp"

namespace wald {

/// A set of morphisms of a fixed category (e.g. the cofibrations C, the weak
/// equivalences W, or a lifting class C^box).
class MorphismClass {
public:
    MorphismClass() = default;  // empty shell; usable only after assignment
    explicit MorphismClass(std::shared_ptr<const FinCategory> cat)
        : cat_(std::move(cat)),
          member_(static_cast<std::size_t>(cat_->morphism_count()), 0) {}

    const FinCategory& category() const { return *cat_; }
    const std::shared_ptr<const FinCategory>& category_ptr() const {
        return cat_;
    }

    bool contains(MorId m) const { return member_[m] != 0; }
    void insert(MorId m) {
        count_ += !member_[m];
        member_[m] = 1;
    }
    void erase(MorId m) {
        count_ -= member_[m] != 0;
        member_[m] = 0;
    }
    int size() const { return count_; }

    std::vector<MorId> members() const {
        std::vector<MorId> out;
        out.reserve(count_);
        for (MorId m = 0; m < static_cast<MorId>(member_.size()); ++m)
            if (member_[m]) out.push_back(m);
        return out;
    }

    bool same_members(const MorphismClass& other) const {
        return member_ == other.member_;
    }

private:
    std::shared_ptr<const FinCategory> cat_;
    std::vector<char> member_;
    int count_ = 0;
};

MorphismClass make_class(std::shared_ptr<const FinCategory> cat,
                         const std::function<bool(MorId)>& pred);

/// Solves the lifting problem for the commuting square
///
///         f
///     A ----> C
///   l |       | r          t : B -> C,  t.l = f,  r.t = g
///     v       v
///     B ----> D
///         g
///
/// Returns the lowest-id diagonal t, or nullopt when no lift exists.
/// Throws std::invalid_argument when the square does not commute.
std::optional<MorId> find_lift(const FinCategory& cat, MorId l, MorId r,
                               MorId f, MorId g);

/// Whether l has the left lifting property against r: every commuting square
/// (l on the left, r on the right) admits a diagonal.
bool has_llp(const FinCategory& cat, MorId l, MorId r);

/// C^box: morphisms with the right lifting property against every member.
MorphismClass rlp_class(const MorphismClass& C);
/// box-F: morphisms with the left lifting property against every member.
MorphismClass llp_class(const MorphismClass& F);

struct WfsReport {
    bool rlp_matches = false;  // C^box == F
    bool llp_matches = false;  // box-F == C
    std::vector<MorId> rlp_extra;    // in C^box but not F
    std::vector<MorId> rlp_missing;  // in F but not C^box
    std::vector<MorId> llp_extra;
    std::vector<MorId> llp_missing;
    long long factored = 0;
    // Morphisms with no F-after-C factorization inside the truncation; such a
    // factorization may exist beyond the size bound, so this is inconclusive
    // rather than a counterexample.
    std::vector<MorId> unfactored_at_bound;

    bool ok() const { return rlp_matches && llp_matches; }
    bool exhaustive() const { return unfactored_at_bound.empty(); }
};

/// Verifies that (C, F) is a weak factorization system: both lifting-class
/// equalities exactly, plus a factorization witness search for every
/// morphism.
WfsReport is_wfs(const MorphismClass& C, const MorphismClass& F);

struct CylinderObject {
    CoproductResult cop;       // X  sqcup X with its injections
    ObjId apex = kNoObj;       // the cylinder
    MorId into = kNoMor;       // e0 sqcup e1 : X sqcup X -> apex, in C
    MorId collapse = kNoMor;   // apex -> X, in F
};

/// Factors the fold map X sqcup X -> X as (collapse in F) after (into in C);
/// nullopt when the coproduct or the factorization is beyond the truncation.
std::optional<CylinderObject> cylinder_object(const MorphismClass& C,
                                              const MorphismClass& F,
                                              ObjId X);

}  // namespace wald
