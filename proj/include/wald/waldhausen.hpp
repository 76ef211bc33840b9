#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "wald/classes.hpp"
#include "wald/fincat.hpp"

namespace wald {

/// A category with distinguished cofibrations, weak equivalences and initial
/// object.  Class membership is tri-state: a morphism can be certainly in,
/// certainly out, or unknown (its classification needs a colimit that the
/// truncation does not contain).  An empty unknown vector means all known.
struct WaldhausenStructure {
    std::shared_ptr<const FinCategory> cat;
    MorphismClass cof;
    MorphismClass we;
    ObjId initial = kNoObj;
    std::vector<char> cof_unknown;
    std::vector<char> we_unknown;

    WaldhausenStructure() = default;  // shell; usable only after assignment
    explicit WaldhausenStructure(std::shared_ptr<const FinCategory> c)
        : cat(c), cof(c), we(c) {}

    bool cof_known(MorId m) const {
        return cof_unknown.empty() || !cof_unknown[m];
    }
    bool we_known(MorId m) const {
        return we_unknown.empty() || !we_unknown[m];
    }
    void mark_cof_unknown(MorId m) {
        if (cof_unknown.empty())
            cof_unknown.assign(cat->morphism_count(), 0);
        cof_unknown[m] = 1;
    }
    void mark_we_unknown(MorId m) {
        if (we_unknown.empty())
            we_unknown.assign(cat->morphism_count(), 0);
        we_unknown[m] = 1;
    }
};

enum class CheckStatus { pass, fail, inconclusive };

struct Witness {
    std::string what;
    std::vector<MorId> mors;
};

struct AxiomCheck {
    std::string axiom;  // "initial", "C1", "C2", "C3", "W1", "W2",
                        // "compose-C", "compose-W"
    CheckStatus status = CheckStatus::pass;
    long long instances = 0;
    long long skipped_at_boundary = 0;
    bool budget_exhausted = false;
    std::vector<Witness> witnesses;
};

struct AxiomReport {
    std::vector<AxiomCheck> checks;
    long long budget_used = 0;

    const AxiomCheck* check(const std::string& axiom) const {
        for (const auto& c : checks)
            if (c.axiom == axiom) return &c;
        return nullptr;
    }
    bool all_pass() const {
        for (const auto& c : checks)
            if (c.status != CheckStatus::pass) return false;
        return true;
    }
    bool exhaustive() const {
        for (const auto& c : checks)
            if (c.budget_exhausted) return false;
        return true;
    }
    CheckStatus overall() const {
        bool inconclusive = false;
        for (const auto& c : checks) {
            if (c.status == CheckStatus::fail) return CheckStatus::fail;
            if (c.status == CheckStatus::inconclusive || c.budget_exhausted)
                inconclusive = true;
        }
        return inconclusive ? CheckStatus::inconclusive : CheckStatus::pass;
    }
    long long total_skipped() const {
        long long n = 0;
        for (const auto& c : checks) n += c.skipped_at_boundary;
        return n;
    }
};

/// Admissibility predicate for pushout spans (f, g).  Derived categories cut
/// out of a truncated ambient category can exhibit accidental internal
/// pushouts for spans whose genuine ambient pushout lies beyond the bound;
/// a guard lets the caller mark such spans as boundary cases to be skipped
/// rather than judged on the accidental colimit.
using SpanGuard = std::function<bool(MorId f, MorId g)>;

/// Exhaustively checks the axioms: isomorphisms are cofibrations and weak
/// equivalences, initial-to-anything is a cofibration, pushouts along
/// cofibrations exist with cofibration far leg, the Gluing Lemma, and
/// composition closure of both classes.  Axiom instances whose colimit lies
/// outside the truncation (or whose span the guard rejects) are tallied as
/// skipped; only exceeding `budget` makes a check inconclusive.
AxiomReport verify_waldhausen(const WaldhausenStructure& E,
                              long long budget = 4'000'000'000LL,
                              const SpanGuard& guard = {});

struct HypothesisFailure {
    int hypothesis = 0;  // 1..4
    std::string detail;
    std::vector<MorId> witness;
};

/// Builds a Waldhausen structure from a weak factorization system (C, C^box)
/// after verifying: (1) (C, C^box) is a WFS with C^box contained in W;
/// (2) W contains isomorphisms and satisfies two-out-of-three; (3) C cap W is
/// closed under cobase change; (4) initial-to-anything lies in C.
std::variant<WaldhausenStructure, HypothesisFailure> wfs_to_waldhausen(
    const MorphismClass& C, const MorphismClass& W);

// --- Derived structures ----------------------------------------------------

/// A commuting square, i.e. a morphism of the morphism category:
/// bot . f = g . top for a square from object f to object g.
struct SquareMor {
    MorId top = kNoMor;
    MorId bot = kNoMor;
};

struct MorCategory {
    WaldhausenStructure S;
    std::vector<MorId> obj_to_base;    // Mor-object -> base morphism
    std::vector<ObjId> base_to_obj;    // base morphism -> Mor-object (kNoObj
                                       // when the base morphism is excluded)
    std::vector<SquareMor> square_of;  // Mor-morphism -> components
    // find id of the square (top, bot) : from -> to, kNoMor if absent
    MorId find_square(ObjId from, ObjId to, MorId top, MorId bot) const;

    std::vector<std::unordered_map<std::uint64_t, MorId>> square_index;
};

/// Mor(E): objects all morphisms of E, maps the commuting squares; a square
/// is a cofibration (weak equivalence) iff both components are.
MorCategory mor_structure(const WaldhausenStructure& E);

struct CoMorCategory {
    MorCategory m;
    // For each square (u, a) : f -> g, the induced map h out of the pushout
    // of (f, u), with h . (leg from target f) = a and h . (leg from target u)
    // = g; nullopt when the pushout is beyond the truncation.
    std::vector<std::optional<MorId>> induced_h;
    std::vector<std::optional<PushoutResult>> square_pushout;
};

/// coMor(E): full subcategory of Mor(E) on the cofibrations; a square (u, a)
/// is a cofibration (weak equivalence) iff u and the induced h are.
CoMorCategory comor_structure(const WaldhausenStructure& E);

struct SliceCategory {
    WaldhausenStructure S;
    ObjId base_obj = kNoObj;
    std::vector<MorId> obj_to_base;  // slice object -> structure map in E
    std::vector<MorId> mor_to_base;  // slice morphism -> morphism of E
};

/// E/A with classes inherited from E; initial object 0 -> A.
SliceCategory slice_structure(const WaldhausenStructure& E, ObjId A);

/// overline{A/E}: cofibrations under A, morphisms all maps under A, classes
/// inherited; initial object id_A.
SliceCategory coslice_cof_structure(const WaldhausenStructure& E, ObjId A);

/// Searches for an isomorphism of categories carrying cof/we/initial of A
/// onto those of B.  Backtracking; intended for small categories only.
std::optional<Functor> find_structure_iso(const WaldhausenStructure& A,
                                          const WaldhausenStructure& B);

}  // namespace wald
