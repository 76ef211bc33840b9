#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wald/waldhausen.hpp"

namespace wald {

/// Full subcategory of the total category on the objects above a fixed base
/// object, with the morphisms above its identity.
struct FiberCategory {
    ObjId base_obj = kNoObj;
    std::shared_ptr<const FinCategory> cat;
    std::vector<ObjId> obj_to_total;
    std::vector<ObjId> total_to_obj;  // kNoObj outside the fiber
    std::vector<MorId> mor_to_total;
    std::vector<MorId> total_to_mor;  // kNoMor outside the fiber
};

FiberCategory fiber(const Functor& p, ObjId A);

/// One chosen cocartesian lifting: the pushed-forward object u_!(X) and the
/// lifting morphism X -> u_!(X) above u.
struct CleavageEntry {
    ObjId lifted = kNoObj;
    MorId lambda = kNoMor;
};

/// A functor T -> B together with a cleavage table keyed by (base morphism u,
/// total object X above source(u)).  Entries whose construction needs a
/// colimit beyond the truncation are absent and tallied in missing_entries.
struct OpfibrationData {
    Functor p;
    std::map<std::pair<MorId, ObjId>, CleavageEntry> cleavage;
    long long missing_entries = 0;

    const CleavageEntry* entry(MorId u, ObjId X) const {
        auto it = cleavage.find({u, X});
        return it == cleavage.end() ? nullptr : &it->second;
    }
};

/// True iff every g out of source(f) above some v . p(f) factors through f by
/// a unique morphism above v.  Full enumeration; the uniqueness quantifier is
/// exactly the cancellation property of cocartesian morphisms.
bool is_cocartesian(const Functor& p, MorId f);

struct FactoredMorphism {
    MorId f = kNoMor;
    MorId u = kNoMor;           // p(f)
    MorId lambda = kNoMor;      // the cleavage lifting at (u, source(f))
    MorId fiber_part = kNoMor;  // the unique vertical f_r with f = f_r . lambda
};

/// Factors f through the cleavage lifting of p(f) at its source.  Returns
/// nullopt when the cleavage entry is absent (truncation); throws
/// std::logic_error when the entry exists but admits no unique vertical
/// factorization (an invalid cleavage).
std::optional<FactoredMorphism> factor(const OpfibrationData& op, MorId f);

/// The reindexing functor along u between the two given fibers: X -> u_!(X)
/// on objects, k -> (lambda . k) factored on morphisms.  nullopt when any
/// needed cleavage entry is absent.
std::optional<Functor> reindex(const OpfibrationData& op, MorId u,
                               const FiberCategory& FA,
                               const FiberCategory& FB);

/// A fiber together with a Waldhausen structure on it (S.cat == fib.cat).
/// `guard`, when set, marks pushout spans whose genuine colimit lies beyond
/// the ambient truncation; verification skips them instead of trusting an
/// accidental internal pushout of the small fiber category.
struct FiberStructure {
    FiberCategory fib;
    WaldhausenStructure S;
    SpanGuard guard;
};

/// Builds one FiberStructure per base object by restricting the classes of a
/// Waldhausen structure on the whole total category.
std::vector<FiberStructure> fibers_from_total(
    const Functor& p, const WaldhausenStructure& total);

/// Installs in every fiber the span guard induced by a truncated ambient
/// category: a fiber span (f, g) is admissible when the span of ambient
/// morphisms (project(f), project(g)) has a pushout within the truncation.
/// `project` maps a morphism of the total category to the ambient morphism
/// carrying its colimit content (the top or bottom square component for the
/// codomain/domain opfibrations).
void attach_span_guards(std::vector<FiberStructure>& fibers,
                        std::shared_ptr<const FinCategory> ambient,
                        std::function<MorId(MorId)> project);

struct OpfibCheckReport {
    bool ok = true;
    std::vector<std::string> problems;
    long long skipped_at_boundary = 0;
    std::vector<std::pair<ObjId, AxiomReport>> fiber_reports;
};

/// Verifies the opfibration axioms and the fiberwise Waldhausen data: the
/// functor is valid, every cleavage entry is a cocartesian lifting above its
/// key, every fiber passes verify_waldhausen, and every reindexing functor is
/// exact (preserves initial up to iso, preserves C and W, and carries fiber
/// pushout squares along cofibrations to pushout squares).
OpfibCheckReport check_waldhausen_opfib(const OpfibrationData& op,
                                        const std::vector<FiberStructure>& fibers);

/// The total Waldhausen structure: f is a cofibration iff p(f) is one in the
/// base and the vertical part f_r is one in its target fiber; likewise for
/// weak equivalences.  Morphisms whose factorization is beyond the truncation
/// are marked unknown.  The initial object is the initial object of the fiber
/// over the base initial object.
WaldhausenStructure total_structure(const OpfibrationData& op,
                                    const WaldhausenStructure& base,
                                    const std::vector<FiberStructure>& fibers);

struct CoherenceReport {
    bool ok = true;
    long long checked = 0;
    long long skipped_at_boundary = 0;
    std::vector<std::string> problems;
};

/// For composable base morphisms u, v: the composite lifting
/// lambda_{v,u_!(X)} . lambda_{u,X} differs from lambda_{vu,X} by a unique
/// vertical isomorphism.  Strict equality of the two is not required.
CoherenceReport check_cleavage_coherence(const OpfibrationData& op);

/// Replaces cleavage entries by isomorphic choices: entries in the residue
/// class selected by `seed` are translated along a non-identity vertical
/// isomorphism out of the lifted object when one exists.  seed 0 returns the
/// input unchanged; distinct seeds give distinct valid cleavages on any total
/// category with enough vertical isomorphisms.
OpfibrationData perturb_cleavage(const OpfibrationData& op, int seed);

/// The codomain opfibration of E: total category Mor(E), p = codomain,
/// cleavage u_!(f : X -> A) = u . f with lifting square (id_X, u).
struct CodomainOpfib {
    MorCategory m;
    OpfibrationData op;
};
CodomainOpfib codomain_opfib(const WaldhausenStructure& E);

/// The domain opfibration of E: total category coMor(E), p = domain,
/// cleavage u_!(f : A >-> X) the cobase change B >-> B u_A X with lifting
/// square (u, bar u) from the pushout; entries beyond the truncation absent.
struct DomainOpfib {
    CoMorCategory cm;
    OpfibrationData op;
};
DomainOpfib domain_opfib(const WaldhausenStructure& E);

}  // namespace wald
