#include "wald/fincat.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>
#include <unordered_set>

namespace wald {

ObjId FinCategory::Builder::add_object(std::string label) {
    obj_labels_.push_back(std::move(label));
    identities_.push_back(kNoMor);
    return static_cast<ObjId>(obj_labels_.size() - 1);
}

MorId FinCategory::Builder::add_morphism(ObjId src, ObjId tgt,
                                         std::string label) {
    assert(src >= 0 && src < object_count());
    assert(tgt >= 0 && tgt < object_count());
    mors_.push_back({src, tgt});
    mor_labels_.push_back(std::move(label));
    return static_cast<MorId>(mors_.size() - 1);
}

void FinCategory::Builder::set_identity(ObjId obj, MorId mor) {
    identities_[obj] = mor;
}

void FinCategory::Builder::set_compose(MorId g, MorId f, MorId gf) {
    triples_.push_back({g, f, gf});
}

std::shared_ptr<const FinCategory> FinCategory::Builder::build() && {
    auto cat = std::make_shared<FinCategory>();
    const int n_obj = object_count();
    const int n_mor = morphism_count();
    cat->mors_ = std::move(mors_);
    cat->obj_labels_ = std::move(obj_labels_);
    cat->mor_labels_ = std::move(mor_labels_);
    cat->identities_ = std::move(identities_);

    cat->out_.resize(n_obj);
    cat->in_.resize(n_obj);
    cat->hom_.resize(static_cast<std::size_t>(n_obj) * n_obj);
    cat->pos_in_in_.resize(n_mor);
    for (MorId m = 0; m < n_mor; ++m) {
        const auto [src, tgt] = cat->mors_[m];
        cat->out_[src].push_back(m);
        cat->pos_in_in_[m] = static_cast<std::int32_t>(cat->in_[tgt].size());
        cat->in_[tgt].push_back(m);
        cat->hom_[static_cast<std::size_t>(src) * n_obj + tgt].push_back(m);
    }

    cat->row_off_.resize(n_mor + 1);
    std::size_t off = 0;
    for (MorId g = 0; g < n_mor; ++g) {
        cat->row_off_[g] = off;
        off += cat->in_[cat->mors_[g].src].size();
    }
    cat->row_off_[n_mor] = off;
    cat->comp_.assign(off, kNoMor);
    for (const Triple& t : triples_) {
        if (cat->mors_[t.f].tgt != cat->mors_[t.g].src)
            throw std::invalid_argument(
                "set_compose on a non-composable pair");
        cat->comp_[cat->row_off_[t.g] + cat->pos_in_in_[t.f]] = t.gf;
    }
    return cat;
}

ValidationReport validate_category(const FinCategory& cat, long long budget) {
    ValidationReport rep;
    const int n_obj = cat.object_count();
    const int n_mor = cat.morphism_count();

    for (ObjId a = 0; a < n_obj; ++a) {
        if (!cat.has_identity(a)) {
            rep.issues.push_back({"object " + std::to_string(a) +
                                      " has no identity morphism",
                                  {}});
            continue;
        }
        MorId id = cat.identity(a);
        if (cat.source(id) != a || cat.target(id) != a)
            rep.issues.push_back({"identity of object " + std::to_string(a) +
                                      " is not an endomorphism of it",
                                  {id}});
    }
    if (!rep.issues.empty()) return rep;  // table shape is broken; stop here

    // Totality, closure and identity neutrality.
    for (MorId g = 0; g < n_mor; ++g) {
        for (MorId f : cat.to(cat.source(g))) {
            MorId gf = cat.compose(g, f);
            if (gf == kNoMor) {
                rep.issues.push_back(
                    {"composition table has no entry for a composable pair",
                     {g, f}});
                continue;
            }
            if (!cat.valid_morphism(gf) ||
                cat.source(gf) != cat.source(f) ||
                cat.target(gf) != cat.target(g)) {
                rep.issues.push_back(
                    {"composite has wrong endpoints", {g, f, gf}});
            }
        }
    }
    for (MorId m = 0; m < n_mor; ++m) {
        MorId lid = cat.identity(cat.target(m));
        MorId rid = cat.identity(cat.source(m));
        if (cat.compose(lid, m) != m)
            rep.issues.push_back({"identity not left-neutral", {lid, m}});
        if (cat.compose(m, rid) != m)
            rep.issues.push_back({"identity not right-neutral", {m, rid}});
    }

    // Associativity over every composable triple, budget-capped.
    for (MorId h = 0; h < n_mor && !rep.budget_exhausted; ++h) {
        for (MorId g : cat.to(cat.source(h))) {
            if (rep.budget_exhausted) break;
            MorId hg = cat.compose(h, g);
            if (hg == kNoMor) continue;
            for (MorId f : cat.to(cat.source(g))) {
                if (++rep.triples_checked > budget) {
                    rep.budget_exhausted = true;
                    break;
                }
                MorId gf = cat.compose(g, f);
                if (gf == kNoMor) continue;
                if (cat.compose(h, gf) != cat.compose(hg, f))
                    rep.issues.push_back(
                        {"associativity fails on triple", {h, g, f}});
            }
        }
    }
    return rep;
}

ValidationReport validate_functor(const Functor& p) {
    ValidationReport rep;
    const FinCategory& S = *p.src;
    const FinCategory& D = *p.dst;
    if (static_cast<int>(p.on_obj.size()) != S.object_count() ||
        static_cast<int>(p.on_mor.size()) != S.morphism_count()) {
        rep.issues.push_back({"functor maps have wrong arity", {}});
        return rep;
    }
    for (ObjId a = 0; a < S.object_count(); ++a) {
        if (!D.valid_object(p.obj(a))) {
            rep.issues.push_back(
                {"object image out of range for " + std::to_string(a), {}});
            return rep;
        }
        if (p.mor(S.identity(a)) != D.identity(p.obj(a)))
            rep.issues.push_back(
                {"identity of object " + std::to_string(a) + " not preserved",
                 {S.identity(a)}});
    }
    for (MorId m = 0; m < S.morphism_count(); ++m) {
        MorId im = p.mor(m);
        if (!D.valid_morphism(im) || D.source(im) != p.obj(S.source(m)) ||
            D.target(im) != p.obj(S.target(m)))
            rep.issues.push_back({"endpoints not preserved", {m}});
    }
    if (!rep.issues.empty()) return rep;
    for (MorId g = 0; g < S.morphism_count(); ++g) {
        for (MorId f : S.to(S.source(g))) {
            ++rep.triples_checked;
            if (p.mor(S.compose(g, f)) != D.compose(p.mor(g), p.mor(f)))
                rep.issues.push_back({"composition not preserved", {g, f}});
        }
    }
    return rep;
}

Functor compose_functors(const Functor& q, const Functor& p) {
    Functor r;
    r.src = p.src;
    r.dst = q.dst;
    r.on_obj.resize(p.on_obj.size());
    r.on_mor.resize(p.on_mor.size());
    for (std::size_t a = 0; a < p.on_obj.size(); ++a)
        r.on_obj[a] = q.obj(p.on_obj[a]);
    for (std::size_t m = 0; m < p.on_mor.size(); ++m)
        r.on_mor[m] = q.mor(p.on_mor[m]);
    return r;
}

// ---------------------------------------------------------------------------
// Colimits by exhaustive cocone enumeration.

ColimitOracle::ColimitOracle(std::shared_ptr<const FinCategory> cat)
    : cat_(std::move(cat)) {}

std::optional<ObjId> ColimitOracle::initial() {
    if (initial_done_) return initial_;
    initial_done_ = true;
    const FinCategory& c = *cat_;
    for (ObjId a = 0; a < c.object_count(); ++a) {
        bool ok = true;
        for (ObjId b = 0; b < c.object_count() && ok; ++b)
            ok = c.hom(a, b).size() == 1;
        if (ok) {
            initial_ = a;
            return initial_;
        }
    }
    return initial_;
}

namespace {

// Packs a pair of morphism ids into a hashable key.
std::uint64_t pair_key(MorId a, MorId b) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
           static_cast<std::uint32_t>(b);
}

}  // namespace

std::optional<PushoutResult> ColimitOracle::pushout(MorId f, MorId g) {
    const FinCategory& c = *cat_;
    if (c.source(f) != c.source(g))
        throw std::invalid_argument("pushout: span legs have distinct sources");
    const std::uint64_t key = pair_key(f, g);
    if (auto it = po_cache_.find(key); it != po_cache_.end())
        return it->second;

    const ObjId B = c.target(f);
    const ObjId C = c.target(g);
    const int n_obj = c.object_count();

    // All commuting cocones (qB, qC) under the span, grouped by nadir object.
    std::vector<std::vector<std::pair<MorId, MorId>>> cocones(n_obj);
    std::vector<std::unordered_set<std::uint64_t>> cocone_keys(n_obj);
    for (ObjId e = 0; e < n_obj; ++e) {
        for (MorId qB : c.hom(B, e))
            for (MorId qC : c.hom(C, e))
                if (c.compose(qB, f) == c.compose(qC, g)) {
                    cocones[e].push_back({qB, qC});
                    cocone_keys[e].insert(pair_key(qB, qC));
                }
    }

    std::optional<PushoutResult> result;
    std::unordered_set<std::uint64_t> seen;
    for (ObjId d = 0; d < n_obj && !result; ++d) {
        // Universality of (pB, pC) at apex d means e |-> (e∘pB, e∘pC) is a
        // bijection hom(d, e) -> cocones[e] for every e; equal cardinalities
        // are a cheap necessary filter.
        bool sizes_ok = true;
        for (ObjId e = 0; e < n_obj && sizes_ok; ++e)
            sizes_ok = c.hom(d, e).size() == cocones[e].size();
        if (!sizes_ok) continue;
        for (const auto& [pB, pC] : cocones[d]) {
            bool universal = true;
            for (ObjId e = 0; e < n_obj && universal; ++e) {
                seen.clear();
                for (MorId m : c.hom(d, e)) {
                    const std::uint64_t k =
                        pair_key(c.compose(m, pB), c.compose(m, pC));
                    if (!cocone_keys[e].count(k) || !seen.insert(k).second) {
                        universal = false;
                        break;
                    }
                }
            }
            if (universal) {
                result = PushoutResult{f, g, d, pB, pC};
                break;
            }
        }
    }
    po_cache_.emplace(key, result);
    return result;
}

std::optional<CoproductResult> ColimitOracle::coproduct(
    std::span<const ObjId> objs) {
    const FinCategory& c = *cat_;
    std::string key;
    for (ObjId o : objs) {
        key += std::to_string(o);
        key += ',';
    }
    if (auto it = cp_cache_.find(key); it != cp_cache_.end())
        return it->second;

    std::optional<CoproductResult> result;
    const int n_obj = c.object_count();
    const int k = static_cast<int>(objs.size());
    if (k == 0) {
        if (auto init = initial())
            result = CoproductResult{{}, *init, {}};
        cp_cache_.emplace(std::move(key), result);
        return result;
    }

    // All cocone tuples under the discrete diagram, grouped by nadir.
    std::vector<std::vector<std::vector<MorId>>> cocones(n_obj);
    std::vector<std::unordered_set<std::string>> cocone_keys(n_obj);
    auto tuple_key = [](const std::vector<MorId>& t) {
        std::string s;
        for (MorId m : t) {
            s += std::to_string(m);
            s += ',';
        }
        return s;
    };
    for (ObjId e = 0; e < n_obj; ++e) {
        std::vector<MorId> tuple(k);
        std::vector<std::size_t> idx(k, 0);
        bool any_empty = false;
        for (int i = 0; i < k; ++i)
            if (c.hom(objs[i], e).empty()) any_empty = true;
        if (any_empty) continue;
        // Odometer over the product of hom sets.
        while (true) {
            for (int i = 0; i < k; ++i) tuple[i] = c.hom(objs[i], e)[idx[i]];
            cocones[e].push_back(tuple);
            cocone_keys[e].insert(tuple_key(tuple));
            int i = k - 1;
            while (i >= 0 && ++idx[i] == c.hom(objs[i], e).size())
                idx[i--] = 0;
            if (i < 0) break;
        }
    }

    std::unordered_set<std::string> seen;
    std::vector<MorId> probe(k);
    for (ObjId d = 0; d < n_obj && !result; ++d) {
        bool sizes_ok = true;
        for (ObjId e = 0; e < n_obj && sizes_ok; ++e)
            sizes_ok = c.hom(d, e).size() == cocones[e].size();
        if (!sizes_ok) continue;
        for (const auto& inj : cocones[d]) {
            bool universal = true;
            for (ObjId e = 0; e < n_obj && universal; ++e) {
                seen.clear();
                for (MorId m : c.hom(d, e)) {
                    for (int i = 0; i < k; ++i)
                        probe[i] = c.compose(m, inj[i]);
                    const std::string pk = tuple_key(probe);
                    if (!cocone_keys[e].count(pk) || !seen.insert(pk).second) {
                        universal = false;
                        break;
                    }
                }
            }
            if (universal) {
                result = CoproductResult{
                    std::vector<ObjId>(objs.begin(), objs.end()), d, inj};
                break;
            }
        }
    }
    cp_cache_.emplace(std::move(key), result);
    return result;
}

std::optional<MorId> ColimitOracle::mediate_pushout(const PushoutResult& po,
                                                    MorId qf,
                                                    MorId qg) const {
    const FinCategory& c = *cat_;
    if (c.compose(qf, po.f) != c.compose(qg, po.g)) return std::nullopt;
    if (c.target(qf) != c.target(qg)) return std::nullopt;
    for (MorId e : c.hom(po.apex, c.target(qf)))
        if (c.compose(e, po.leg_from_f) == qf &&
            c.compose(e, po.leg_from_g) == qg)
            return e;
    return std::nullopt;
}

std::optional<MorId> ColimitOracle::copair(const CoproductResult& cp,
                                           std::span<const MorId> legs) const {
    const FinCategory& c = *cat_;
    if (legs.size() != cp.injections.size()) return std::nullopt;
    if (legs.empty()) {
        // Unique map out of the initial object.
        return std::nullopt;  // target unknown without legs; callers use hom()
    }
    const ObjId tgt = c.target(legs[0]);
    for (MorId m : legs)
        if (c.target(m) != tgt) return std::nullopt;
    for (MorId e : c.hom(cp.apex, tgt)) {
        bool ok = true;
        for (std::size_t i = 0; i < legs.size() && ok; ++i)
            ok = c.compose(e, cp.injections[i]) == legs[i];
        if (ok) return e;
    }
    return std::nullopt;
}

std::optional<ObjId> find_initial(const FinCategory& cat) {
    for (ObjId a = 0; a < cat.object_count(); ++a) {
        bool ok = true;
        for (ObjId b = 0; b < cat.object_count() && ok; ++b)
            ok = cat.hom(a, b).size() == 1;
        if (ok) return a;
    }
    return std::nullopt;
}

std::optional<PushoutResult> pushout(std::shared_ptr<const FinCategory> cat,
                                     MorId f, MorId g) {
    ColimitOracle oracle(std::move(cat));
    return oracle.pushout(f, g);
}

std::optional<CoproductResult> coproduct(
    std::shared_ptr<const FinCategory> cat, std::span<const ObjId> objs) {
    ColimitOracle oracle(std::move(cat));
    return oracle.coproduct(objs);
}

std::optional<MorId> inverse(const FinCategory& cat, MorId f) {
    const ObjId a = cat.source(f);
    const ObjId b = cat.target(f);
    for (MorId g : cat.hom(b, a))
        if (cat.compose(g, f) == cat.identity(a) &&
            cat.compose(f, g) == cat.identity(b))
            return g;
    return std::nullopt;
}

bool is_iso(const FinCategory& cat, MorId f) {
    return inverse(cat, f).has_value();
}

std::optional<MorId> find_object_iso(const FinCategory& cat, ObjId a,
                                     ObjId b) {
    for (MorId f : cat.hom(a, b))
        if (is_iso(cat, f)) return f;
    return std::nullopt;
}

}  // namespace wald
