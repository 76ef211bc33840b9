#include "wald/classes.hpp"

#include <stdexcept>

namespace wald {

MorphismClass make_class(std::shared_ptr<const FinCategory> cat,
                         const std::function<bool(MorId)>& pred) {
    MorphismClass cls(cat);
    for (MorId m = 0; m < cat->morphism_count(); ++m)
        if (pred(m)) cls.insert(m);
    return cls;
}

std::optional<MorId> find_lift(const FinCategory& cat, MorId l, MorId r,
                               MorId f, MorId g) {
    if (cat.source(f) != cat.source(l) || cat.source(g) != cat.target(l) ||
        cat.target(f) != cat.source(r) || cat.target(g) != cat.target(r) ||
        cat.compose(r, f) != cat.compose(g, l))
        throw std::invalid_argument("find_lift: square does not commute");
    for (MorId t : cat.hom(cat.target(l), cat.source(r)))
        if (cat.compose(t, l) == f && cat.compose(r, t) == g) return t;
    return std::nullopt;
}

bool has_llp(const FinCategory& cat, MorId l, MorId r) {
    // Every commuting square with l on the left and r on the right must have
    // a diagonal.
    for (MorId f : cat.hom(cat.source(l), cat.source(r))) {
        const MorId rf = cat.compose(r, f);
        for (MorId g : cat.hom(cat.target(l), cat.target(r))) {
            if (cat.compose(g, l) != rf) continue;
            bool lifted = false;
            for (MorId t : cat.hom(cat.target(l), cat.source(r)))
                if (cat.compose(t, l) == f && cat.compose(r, t) == g) {
                    lifted = true;
                    break;
                }
            if (!lifted) return false;
        }
    }
    return true;
}

MorphismClass rlp_class(const MorphismClass& C) {
    const FinCategory& cat = C.category();
    const std::vector<MorId> members = C.members();
    return make_class(C.category_ptr(), [&](MorId r) {
        for (MorId l : members)
            if (!has_llp(cat, l, r)) return false;
        return true;
    });
}

MorphismClass llp_class(const MorphismClass& F) {
    const FinCategory& cat = F.category();
    const std::vector<MorId> members = F.members();
    return make_class(F.category_ptr(), [&](MorId l) {
        for (MorId r : members)
            if (!has_llp(cat, l, r)) return false;
        return true;
    });
}

namespace {

void diff_classes(const MorphismClass& got, const MorphismClass& want,
                  std::vector<MorId>& extra, std::vector<MorId>& missing) {
    for (MorId m = 0; m < got.category().morphism_count(); ++m) {
        if (got.contains(m) && !want.contains(m)) extra.push_back(m);
        if (!got.contains(m) && want.contains(m)) missing.push_back(m);
    }
}

}  // namespace

WfsReport is_wfs(const MorphismClass& C, const MorphismClass& F) {
    const FinCategory& cat = C.category();
    WfsReport rep;

    MorphismClass rlp = rlp_class(C);
    diff_classes(rlp, F, rep.rlp_extra, rep.rlp_missing);
    rep.rlp_matches = rep.rlp_extra.empty() && rep.rlp_missing.empty();

    MorphismClass llp = llp_class(F);
    diff_classes(llp, C, rep.llp_extra, rep.llp_missing);
    rep.llp_matches = rep.llp_extra.empty() && rep.llp_missing.empty();

    // Factor every morphism as (member of F) after (member of C).
    for (MorId m = 0; m < cat.morphism_count(); ++m) {
        bool found = false;
        for (MorId c : cat.from(cat.source(m))) {
            if (!C.contains(c)) continue;
            for (MorId f : cat.hom(cat.target(c), cat.target(m)))
                if (F.contains(f) && cat.compose(f, c) == m) {
                    found = true;
                    break;
                }
            if (found) break;
        }
        if (found)
            ++rep.factored;
        else
            rep.unfactored_at_bound.push_back(m);
    }
    return rep;
}

std::optional<CylinderObject> cylinder_object(const MorphismClass& C,
                                              const MorphismClass& F,
                                              ObjId X) {
    const FinCategory& cat = C.category();
    ColimitOracle oracle(C.category_ptr());
    const ObjId objs[2] = {X, X};
    auto cop = oracle.coproduct(objs);
    if (!cop) return std::nullopt;

    // The fold map: identity on both legs.
    const MorId legs[2] = {cat.identity(X), cat.identity(X)};
    auto fold = oracle.copair(*cop, legs);
    if (!fold) return std::nullopt;

    for (MorId into : cat.from(cop->apex)) {
        if (!C.contains(into)) continue;
        for (MorId collapse : cat.hom(cat.target(into), X))
            if (F.contains(collapse) && cat.compose(collapse, into) == *fold)
                return CylinderObject{*cop, cat.target(into), into, collapse};
    }
    return std::nullopt;
}

}  // namespace wald
