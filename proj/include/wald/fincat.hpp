#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace wald {

using ObjId = std::int32_t;
using MorId = std::int32_t;

inline constexpr ObjId kNoObj = -1;
inline constexpr MorId kNoMor = -1;

/// A finite category given by explicit tables: objects, morphisms with
/// source/target, identities, and a total composition map on composable
/// pairs.  Instances are immutable once built.
class FinCategory {
public:
    class Builder;

    int object_count() const { return static_cast<int>(obj_labels_.size()); }
    int morphism_count() const { return static_cast<int>(mors_.size()); }

    ObjId source(MorId m) const { return mors_[m].src; }
    ObjId target(MorId m) const { return mors_[m].tgt; }

    MorId identity(ObjId a) const { return identities_[a]; }
    bool has_identity(ObjId a) const { return identities_[a] != kNoMor; }

    bool composable(MorId g, MorId f) const { return target(f) == source(g); }

    /// g after f; kNoMor when the table has no entry for a composable pair
    /// (malformed input categories only).
    MorId compose(MorId g, MorId f) const {
        return comp_[row_off_[g] + pos_in_in_[f]];
    }

    const std::vector<MorId>& hom(ObjId a, ObjId b) const {
        return hom_[static_cast<std::size_t>(a) * obj_labels_.size() + b];
    }
    /// All morphisms with the given source (resp. target).
    const std::vector<MorId>& from(ObjId a) const { return out_[a]; }
    const std::vector<MorId>& to(ObjId b) const { return in_[b]; }

    std::string_view object_label(ObjId a) const { return obj_labels_[a]; }
    std::string_view morphism_label(MorId m) const { return mor_labels_[m]; }

    bool valid_object(ObjId a) const { return a >= 0 && a < object_count(); }
    bool valid_morphism(MorId m) const { return m >= 0 && m < morphism_count(); }

private:
    struct MorEnds {
        ObjId src;
        ObjId tgt;
    };

    std::vector<MorEnds> mors_;
    std::vector<std::string> obj_labels_;
    std::vector<std::string> mor_labels_;
    std::vector<MorId> identities_;
    std::vector<std::vector<MorId>> out_;
    std::vector<std::vector<MorId>> in_;
    std::vector<std::vector<MorId>> hom_;
    std::vector<std::int32_t> pos_in_in_;
    std::vector<std::size_t> row_off_;
    std::vector<MorId> comp_;

    friend class Builder;
};

/// Incremental construction of a FinCategory.  Composition entries are
/// collected and compiled into a CSR layout keyed by (g, position of f in the
/// target bucket of source(g)).
class FinCategory::Builder {
public:
    ObjId add_object(std::string label = {});
    MorId add_morphism(ObjId src, ObjId tgt, std::string label = {});
    void set_identity(ObjId obj, MorId mor);
    void set_compose(MorId g, MorId f, MorId gf);

    int object_count() const { return static_cast<int>(obj_labels_.size()); }
    int morphism_count() const { return static_cast<int>(mors_.size()); }
    ObjId source(MorId m) const { return mors_[m].src; }
    ObjId target(MorId m) const { return mors_[m].tgt; }

    std::shared_ptr<const FinCategory> build() &&;

private:
    struct Triple {
        MorId g, f, gf;
    };
    std::vector<MorEnds> mors_;
    std::vector<std::string> obj_labels_;
    std::vector<std::string> mor_labels_;
    std::vector<MorId> identities_;
    std::vector<Triple> triples_;
};

/// A functor between explicitly tabulated categories.
struct Functor {
    std::shared_ptr<const FinCategory> src;
    std::shared_ptr<const FinCategory> dst;
    std::vector<ObjId> on_obj;
    std::vector<MorId> on_mor;

    ObjId obj(ObjId a) const { return on_obj[a]; }
    MorId mor(MorId m) const { return on_mor[m]; }
};

struct ValidationIssue {
    std::string what;
    std::vector<MorId> mors;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;
    long long triples_checked = 0;
    bool budget_exhausted = false;

    bool ok() const { return issues.empty(); }
};

/// Checks identities, totality/closure of the composition table and
/// associativity on every composable triple.  Violations are reported, not
/// thrown.  `budget` caps the number of associativity triples examined.
ValidationReport validate_category(const FinCategory& cat,
                                   long long budget = 200'000'000);

ValidationReport validate_functor(const Functor& p);

/// Functor composition q after p.
Functor compose_functors(const Functor& q, const Functor& p);

struct PushoutResult {
    MorId f = kNoMor;        // f : A -> B
    MorId g = kNoMor;        // g : A -> C
    ObjId apex = kNoObj;     // B \sqcup_A C
    MorId leg_from_f = kNoMor;  // target(f) -> apex
    MorId leg_from_g = kNoMor;  // target(g) -> apex
};

struct CoproductResult {
    std::vector<ObjId> factors;
    ObjId apex = kNoObj;
    std::vector<MorId> injections;
};

/// Enumeration-backed colimits with caching.  A returned colimit is verified
/// universal against every cocone inside the category; `std::nullopt` means
/// no universal cocone exists within this finite truncation.
class ColimitOracle {
public:
    explicit ColimitOracle(std::shared_ptr<const FinCategory> cat);

    const FinCategory& category() const { return *cat_; }
    std::shared_ptr<const FinCategory> category_ptr() const { return cat_; }

    std::optional<ObjId> initial();

    /// Canonical pushout of the span target(f) <- source -> target(g); the
    /// apex with the lowest object id wins, then the lexicographically least
    /// pair of legs.  Requires source(f) == source(g).
    std::optional<PushoutResult> pushout(MorId f, MorId g);

    /// Canonical finite coproduct; the empty coproduct is the initial object.
    std::optional<CoproductResult> coproduct(std::span<const ObjId> objs);

    /// The unique mediating morphism out of a pushout for the cocone
    /// (qf, qg); nullopt if the cocone does not commute.
    std::optional<MorId> mediate_pushout(const PushoutResult& po, MorId qf,
                                         MorId qg) const;

    /// The unique mediating morphism out of a coproduct for a cocone tuple.
    std::optional<MorId> copair(const CoproductResult& cp,
                                std::span<const MorId> legs) const;

private:
    std::shared_ptr<const FinCategory> cat_;
    bool initial_done_ = false;
    std::optional<ObjId> initial_;
    std::unordered_map<std::uint64_t, std::optional<PushoutResult>> po_cache_;
    std::unordered_map<std::string, std::optional<CoproductResult>> cp_cache_;
};

std::optional<ObjId> find_initial(const FinCategory& cat);
std::optional<PushoutResult> pushout(std::shared_ptr<const FinCategory> cat,
                                     MorId f, MorId g);
std::optional<CoproductResult> coproduct(
    std::shared_ptr<const FinCategory> cat, std::span<const ObjId> objs);

bool is_iso(const FinCategory& cat, MorId f);
std::optional<MorId> inverse(const FinCategory& cat, MorId f);

/// Some isomorphism a -> b in the category, lowest morphism id first.
std::optional<MorId> find_object_iso(const FinCategory& cat, ObjId a, ObjId b);

}  // namespace wald
