#include "wald/waldhausen.hpp"

#include <algorithm>
#include <cassert>

namespace wald {

namespace {

std::uint64_t pack(MorId a, MorId b) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
           static_cast<std::uint32_t>(b);
}

void add_witness(AxiomCheck& c, std::string what, std::vector<MorId> mors) {
    c.status = CheckStatus::fail;
    if (c.witnesses.size() < 16)
        c.witnesses.push_back({std::move(what), std::move(mors)});
}

}  // namespace

AxiomReport verify_waldhausen(const WaldhausenStructure& E, long long budget,
                              const SpanGuard& guard) {
    const FinCategory& cat = *E.cat;
    AxiomReport rep;
    ColimitOracle oracle(E.cat);
    long long& used = rep.budget_used;
    auto spend = [&](long long n = 1) {
        used += n;
        return used <= budget;
    };

    // initial: the designated object has exactly one morphism to each object.
    {
        AxiomCheck c{"initial"};
        if (!cat.valid_object(E.initial)) {
            add_witness(c, "designated initial object is not an object", {});
        } else {
            for (ObjId b = 0; b < cat.object_count(); ++b) {
                ++c.instances;
                if (cat.hom(E.initial, b).size() != 1)
                    add_witness(c,
                                "hom(0, " + std::to_string(b) +
                                    ") is not a singleton",
                                {});
            }
        }
        rep.checks.push_back(std::move(c));
    }
    if (rep.checks.back().status == CheckStatus::fail) return rep;

    // (C1)/(W1): every isomorphism is a cofibration and a weak equivalence.
    {
        AxiomCheck c1{"C1"}, w1{"W1"};
        for (MorId m = 0; m < cat.morphism_count(); ++m) {
            spend();
            if (!is_iso(cat, m)) continue;
            ++c1.instances;
            ++w1.instances;
            if (!E.cof_known(m))
                ++c1.skipped_at_boundary;
            else if (!E.cof.contains(m))
                add_witness(c1, "isomorphism not a cofibration", {m});
            if (!E.we_known(m))
                ++w1.skipped_at_boundary;
            else if (!E.we.contains(m))
                add_witness(w1, "isomorphism not a weak equivalence", {m});
        }
        rep.checks.push_back(std::move(c1));
        rep.checks.push_back(std::move(w1));
    }

    // (C2): the unique morphism 0 -> A is a cofibration for every A.
    {
        AxiomCheck c{"C2"};
        for (ObjId a = 0; a < cat.object_count(); ++a) {
            ++c.instances;
            MorId m = cat.hom(E.initial, a)[0];
            if (!E.cof_known(m))
                ++c.skipped_at_boundary;
            else if (!E.cof.contains(m))
                add_witness(c,
                            "0 -> " + std::to_string(a) +
                                " is not a cofibration",
                            {m});
        }
        rep.checks.push_back(std::move(c));
    }

    // Composition closure of both classes.
    {
        AxiomCheck cc{"compose-C"}, cw{"compose-W"};
        for (MorId g = 0; g < cat.morphism_count(); ++g) {
            const bool g_cof = E.cof_known(g) && E.cof.contains(g);
            const bool g_we = E.we_known(g) && E.we.contains(g);
            if (!g_cof && !g_we) continue;
            for (MorId f : cat.to(cat.source(g))) {
                spend();
                MorId gf = cat.compose(g, f);
                if (g_cof && E.cof_known(f) && E.cof.contains(f)) {
                    ++cc.instances;
                    if (!E.cof_known(gf))
                        ++cc.skipped_at_boundary;
                    else if (!E.cof.contains(gf))
                        add_witness(cc, "composite of cofibrations not one",
                                    {g, f, gf});
                }
                if (g_we && E.we_known(f) && E.we.contains(f)) {
                    ++cw.instances;
                    if (!E.we_known(gf))
                        ++cw.skipped_at_boundary;
                    else if (!E.we.contains(gf))
                        add_witness(cw,
                                    "composite of weak equivalences not one",
                                    {g, f, gf});
                }
            }
        }
        rep.checks.push_back(std::move(cc));
        rep.checks.push_back(std::move(cw));
    }

    // Known cofibrations grouped by source, for (C3)/(W2).
    std::vector<std::vector<MorId>> cof_from(cat.object_count());
    std::vector<std::vector<MorId>> we_from(cat.object_count());
    for (MorId m = 0; m < cat.morphism_count(); ++m) {
        if (E.cof_known(m) && E.cof.contains(m))
            cof_from[cat.source(m)].push_back(m);
        if (E.we_known(m) && E.we.contains(m))
            we_from[cat.source(m)].push_back(m);
    }

    // (C3): pushouts along cofibrations, with cofibration far leg.
    {
        AxiomCheck c{"C3"};
        for (ObjId a = 0; a < cat.object_count() && !c.budget_exhausted; ++a) {
            for (MorId f : cof_from[a]) {
                if (c.budget_exhausted) break;
                for (MorId g : cat.from(a)) {
                    if (!spend(4)) {
                        c.budget_exhausted = true;
                        break;
                    }
                    ++c.instances;
                    if (guard && !guard(f, g)) {
                        ++c.skipped_at_boundary;
                        continue;
                    }
                    auto po = oracle.pushout(f, g);
                    if (!po) {
                        ++c.skipped_at_boundary;
                        continue;
                    }
                    const MorId far = po->leg_from_g;  // target(g) -> apex
                    if (!E.cof_known(far))
                        ++c.skipped_at_boundary;
                    else if (!E.cof.contains(far))
                        add_witness(
                            c, "far pushout leg is not a cofibration",
                            {f, g, far});
                }
            }
        }
        rep.checks.push_back(std::move(c));
    }

    // (W2) Gluing Lemma: for spans (f in C, g) and (f' in C, g') connected by
    // weak equivalences a, b, c, the induced map of pushouts is in W.
    {
        AxiomCheck c{"W2"};
        for (ObjId A = 0; A < cat.object_count() && !c.budget_exhausted; ++A) {
            for (MorId f : cof_from[A]) {
                if (c.budget_exhausted) break;
                const ObjId B = cat.target(f);
                for (MorId g : cat.from(A)) {
                    if (c.budget_exhausted) break;
                    const ObjId C = cat.target(g);
                    if (guard && !guard(f, g)) {
                        ++c.skipped_at_boundary;
                        continue;
                    }
                    auto po = oracle.pushout(f, g);
                    if (!po) {
                        ++c.skipped_at_boundary;
                        continue;
                    }
                    // Enumerate the comparison maps (a, b, c) from the weak
                    // equivalences out of each span corner; the primed span
                    // legs are then forced up to a hom-set scan.
                    for (MorId a : we_from[A]) {
                        if (c.budget_exhausted) break;
                        const ObjId A2 = cat.target(a);
                        for (MorId b : we_from[B]) {
                            if (c.budget_exhausted) break;
                            const ObjId B2 = cat.target(b);
                            const MorId bf = cat.compose(b, f);
                            for (MorId f2 : cof_from[A2]) {
                                if (c.budget_exhausted) break;
                                if (!spend()) {
                                    c.budget_exhausted = true;
                                    break;
                                }
                                if (cat.target(f2) != B2) continue;
                                if (cat.compose(f2, a) != bf) continue;
                                for (MorId cc : we_from[C]) {
                                    if (c.budget_exhausted) break;
                                    const ObjId C2 = cat.target(cc);
                                    const MorId cg = cat.compose(cc, g);
                                    for (MorId g2 : cat.hom(A2, C2)) {
                                        if (!spend()) {
                                            c.budget_exhausted = true;
                                            break;
                                        }
                                        if (cat.compose(g2, a) != cg)
                                            continue;
                                        if (guard && !guard(f2, g2)) {
                                            ++c.skipped_at_boundary;
                                            continue;
                                        }
                                        auto po2 = oracle.pushout(f2, g2);
                                        if (!po2) {
                                            ++c.skipped_at_boundary;
                                            continue;
                                        }
                                        ++c.instances;
                                        auto e = oracle.mediate_pushout(
                                            *po,
                                            cat.compose(po2->leg_from_f, b),
                                            cat.compose(po2->leg_from_g, cc));
                                        if (!e) {
                                            add_witness(c,
                                                        "no induced map of "
                                                        "pushouts",
                                                        {f, g, f2, g2, a});
                                            continue;
                                        }
                                        if (!E.we_known(*e)) {
                                            ++c.skipped_at_boundary;
                                            continue;
                                        }
                                        if (!E.we.contains(*e))
                                            add_witness(
                                                c,
                                                "induced map of pushouts "
                                                "is not a weak equivalence",
                                                {f, g, f2, g2, a, b, cc, *e});
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        rep.checks.push_back(std::move(c));
    }

    for (auto& c : rep.checks)
        if (c.budget_exhausted && c.status == CheckStatus::pass)
            c.status = CheckStatus::inconclusive;
    return rep;
}

std::variant<WaldhausenStructure, HypothesisFailure> wfs_to_waldhausen(
    const MorphismClass& C, const MorphismClass& W) {
    const FinCategory& cat = C.category();
    auto cat_ptr = C.category_ptr();
    ColimitOracle oracle(cat_ptr);

    // (1) (C, C^box) is a weak factorization system with C^box inside W.
    MorphismClass F = rlp_class(C);
    WfsReport wfs = is_wfs(C, F);
    if (!wfs.ok())
        return HypothesisFailure{
            1, "(C, C^box) fails the lifting-class equalities",
            wfs.llp_extra.empty() ? wfs.llp_missing : wfs.llp_extra};
    for (MorId m = 0; m < cat.morphism_count(); ++m)
        if (F.contains(m) && !W.contains(m))
            return HypothesisFailure{
                1, "member of C^box is not a weak equivalence", {m}};

    // (2) W contains all isomorphisms and satisfies two-out-of-three.
    for (MorId m = 0; m < cat.morphism_count(); ++m)
        if (is_iso(cat, m) && !W.contains(m))
            return HypothesisFailure{
                2, "isomorphism not a weak equivalence", {m}};
    for (MorId g = 0; g < cat.morphism_count(); ++g)
        for (MorId f : cat.to(cat.source(g))) {
            MorId gf = cat.compose(g, f);
            int in = W.contains(g) + W.contains(f) + W.contains(gf);
            if (in == 2)
                return HypothesisFailure{
                    2, "two-out-of-three fails", {g, f, gf}};
        }

    // (3) C cap W is closed under cobase change, where the pushout exists.
    for (MorId c = 0; c < cat.morphism_count(); ++c) {
        if (!C.contains(c) || !W.contains(c)) continue;
        for (MorId g : cat.from(cat.source(c))) {
            auto po = oracle.pushout(c, g);
            if (!po) continue;  // boundary: nothing to check
            const MorId pushed = po->leg_from_g;
            if (!C.contains(pushed) || !W.contains(pushed))
                return HypothesisFailure{
                    3, "cobase change of a trivial cofibration is not one",
                    {c, g, pushed}};
        }
    }

    // (4) 0 -> X is a cofibration for every X.
    auto init = oracle.initial();
    if (!init)
        return HypothesisFailure{4, "category has no initial object", {}};
    for (ObjId x = 0; x < cat.object_count(); ++x) {
        MorId m = cat.hom(*init, x)[0];
        if (!C.contains(m))
            return HypothesisFailure{
                4, "initial-to-object morphism not a cofibration", {m}};
    }

    WaldhausenStructure S(cat_ptr);
    S.cof = C;
    S.we = W;
    S.initial = *init;
    return S;
}

// --- Derived structures ----------------------------------------------------

MorId MorCategory::find_square(ObjId from, ObjId to, MorId top,
                               MorId bot) const {
    const std::size_t n = obj_to_base.size();
    const auto& index = square_index[static_cast<std::size_t>(from) * n + to];
    auto it = index.find(pack(top, bot));
    return it == index.end() ? kNoMor : it->second;
}

namespace {

// Shared construction of Mor(E) and its full subcategory coMor(E); when
// `objects_pred` filters, only base morphisms satisfying it become objects.
MorCategory build_square_category(
    const WaldhausenStructure& E,
    const std::function<bool(MorId)>& objects_pred) {
    const FinCategory& base = *E.cat;
    MorCategory out;

    // Objects in lexicographic (source, target, id) order.
    std::vector<MorId> objs;
    for (MorId m = 0; m < base.morphism_count(); ++m)
        if (objects_pred(m)) objs.push_back(m);
    std::sort(objs.begin(), objs.end(), [&](MorId x, MorId y) {
        return std::tuple(base.source(x), base.target(x), x) <
               std::tuple(base.source(y), base.target(y), y);
    });

    FinCategory::Builder b;
    std::vector<ObjId> base_to_obj(base.morphism_count(), kNoObj);
    for (MorId m : objs) {
        ObjId o = b.add_object(std::string(base.morphism_label(m)));
        base_to_obj[m] = o;
    }
    const int n_obj = static_cast<int>(objs.size());

    std::vector<SquareMor> square_of;
    std::vector<std::unordered_map<std::uint64_t, MorId>> index(
        static_cast<std::size_t>(n_obj) * n_obj);
    for (ObjId of = 0; of < n_obj; ++of) {
        const MorId f = objs[of];
        for (ObjId og = 0; og < n_obj; ++og) {
            const MorId g = objs[og];
            for (MorId top : base.hom(base.source(f), base.source(g))) {
                const MorId gtop = base.compose(g, top);
                for (MorId bot : base.hom(base.target(f), base.target(g))) {
                    if (base.compose(bot, f) != gtop) continue;
                    MorId sq = b.add_morphism(of, og);
                    square_of.push_back({top, bot});
                    index[static_cast<std::size_t>(of) * n_obj + og]
                        .emplace(pack(top, bot), sq);
                }
            }
        }
    }
    for (ObjId o = 0; o < n_obj; ++o) {
        const MorId m = objs[o];
        b.set_identity(
            o, index[static_cast<std::size_t>(o) * n_obj + o].at(pack(
                   base.identity(base.source(m)),
                   base.identity(base.target(m)))));
    }
    // Composition: paste squares.
    {
        // bucket squares by source object for the inner loop
        std::vector<std::vector<MorId>> by_target(n_obj);
        for (MorId s = 0; s < static_cast<MorId>(square_of.size()); ++s)
            by_target[b.target(s)].push_back(s);
        for (MorId s2 = 0; s2 < static_cast<MorId>(square_of.size()); ++s2) {
            const ObjId from2 = b.source(s2);
            const ObjId to2 = b.target(s2);
            for (MorId s1 : by_target[from2]) {
                const MorId top = base.compose(square_of[s2].top,
                                               square_of[s1].top);
                const MorId bot = base.compose(square_of[s2].bot,
                                               square_of[s1].bot);
                MorId comp =
                    index[static_cast<std::size_t>(b.source(s1)) * n_obj +
                          to2]
                        .at(pack(top, bot));
                b.set_compose(s2, s1, comp);
            }
        }
    }

    auto cat = std::move(b).build();
    WaldhausenStructure S(cat);
    // Initial object: the identity of the initial object of E (for Mor) or
    // the unique cofibration 0 -> 0 (same morphism) for coMor.
    S.initial = base_to_obj[base.hom(E.initial, E.initial)[0]];

    out.S = std::move(S);
    out.obj_to_base = std::move(objs);
    out.base_to_obj = std::move(base_to_obj);
    out.square_of = std::move(square_of);
    out.square_index = std::move(index);
    return out;
}

}  // namespace

MorCategory mor_structure(const WaldhausenStructure& E) {
    MorCategory out =
        build_square_category(E, [](MorId) { return true; });
    for (MorId s = 0; s < out.S.cat->morphism_count(); ++s) {
        const auto& sq = out.square_of[s];
        if (E.cof.contains(sq.top) && E.cof.contains(sq.bot))
            out.S.cof.insert(s);
        if (E.we.contains(sq.top) && E.we.contains(sq.bot))
            out.S.we.insert(s);
    }
    return out;
}

CoMorCategory comor_structure(const WaldhausenStructure& E) {
    CoMorCategory out;
    out.m = build_square_category(
        E, [&](MorId m) { return E.cof.contains(m); });
    ColimitOracle oracle(E.cat);

    WaldhausenStructure& S = out.m.S;
    const int n_sq = S.cat->morphism_count();
    out.induced_h.resize(n_sq);
    out.square_pushout.resize(n_sq);
    for (MorId s = 0; s < n_sq; ++s) {
        const MorId f = out.m.obj_to_base[S.cat->source(s)];  // f : A >-> X
        const MorId g = out.m.obj_to_base[S.cat->target(s)];  // g : B >-> Y
        const MorId u = out.m.square_of[s].top;               // u : A -> B
        const MorId a = out.m.square_of[s].bot;               // a : X -> Y
        const bool u_cof = E.cof.contains(u);
        const bool u_we = E.we.contains(u);
        // The induced h out of the pushout of (f, u) satisfies
        // h . (leg from X) = a  and  h . (leg from B) = g.
        auto po = oracle.pushout(f, u);
        out.square_pushout[s] = po;
        std::optional<MorId> h;
        if (po) h = oracle.mediate_pushout(*po, a, g);
        out.induced_h[s] = h;
        if (h) {
            if (u_cof && E.cof.contains(*h)) S.cof.insert(s);
            if (u_we && E.we.contains(*h)) S.we.insert(s);
        } else {
            // Without h the class is unknown, unless u already disqualifies.
            if (u_cof) S.mark_cof_unknown(s);
            if (u_we) S.mark_we_unknown(s);
        }
    }
    return out;
}

SliceCategory slice_structure(const WaldhausenStructure& E, ObjId A) {
    const FinCategory& base = *E.cat;
    SliceCategory out;
    out.base_obj = A;

    // Objects: morphisms into A, ascending id.
    std::vector<MorId> objs(base.to(A));
    std::sort(objs.begin(), objs.end());
    std::vector<ObjId> base_to_obj(base.morphism_count(), kNoObj);

    FinCategory::Builder b;
    for (MorId x : objs)
        base_to_obj[x] = b.add_object(std::string(base.morphism_label(x)));
    const int n_obj = static_cast<int>(objs.size());

    // Morphisms (x : X -> A) => (y : Y -> A): maps m : X -> Y, y . m = x.
    std::vector<MorId> mor_to_base;
    std::vector<std::unordered_map<MorId, MorId>> index(
        static_cast<std::size_t>(n_obj) * n_obj);
    for (ObjId ox = 0; ox < n_obj; ++ox)
        for (ObjId oy = 0; oy < n_obj; ++oy) {
            const MorId x = objs[ox], y = objs[oy];
            for (MorId m : base.hom(base.source(x), base.source(y)))
                if (base.compose(y, m) == x) {
                    MorId sm = b.add_morphism(ox, oy);
                    mor_to_base.push_back(m);
                    index[static_cast<std::size_t>(ox) * n_obj + oy]
                        .emplace(m, sm);
                }
        }
    for (ObjId o = 0; o < n_obj; ++o)
        b.set_identity(o, index[static_cast<std::size_t>(o) * n_obj + o].at(
                              base.identity(base.source(objs[o]))));
    {
        std::vector<std::vector<MorId>> by_target(n_obj);
        for (MorId s = 0; s < static_cast<MorId>(mor_to_base.size()); ++s)
            by_target[b.target(s)].push_back(s);
        for (MorId s2 = 0; s2 < static_cast<MorId>(mor_to_base.size()); ++s2)
            for (MorId s1 : by_target[b.source(s2)])
                b.set_compose(
                    s2, s1,
                    index[static_cast<std::size_t>(b.source(s1)) * n_obj +
                          b.target(s2)]
                        .at(base.compose(mor_to_base[s2], mor_to_base[s1])));
    }
    auto cat = std::move(b).build();
    WaldhausenStructure S(cat);
    S.initial = base_to_obj[base.hom(E.initial, A)[0]];
    for (MorId s = 0; s < cat->morphism_count(); ++s) {
        if (E.cof.contains(mor_to_base[s])) S.cof.insert(s);
        if (E.we.contains(mor_to_base[s])) S.we.insert(s);
    }
    out.S = std::move(S);
    out.obj_to_base = std::move(objs);
    out.mor_to_base = std::move(mor_to_base);
    return out;
}

SliceCategory coslice_cof_structure(const WaldhausenStructure& E, ObjId A) {
    const FinCategory& base = *E.cat;
    SliceCategory out;
    out.base_obj = A;

    // Objects: cofibrations out of A, ascending id.
    std::vector<MorId> objs;
    for (MorId m : base.from(A))
        if (E.cof.contains(m)) objs.push_back(m);
    std::sort(objs.begin(), objs.end());
    std::vector<ObjId> base_to_obj(base.morphism_count(), kNoObj);

    FinCategory::Builder b;
    for (MorId x : objs)
        base_to_obj[x] = b.add_object(std::string(base.morphism_label(x)));
    const int n_obj = static_cast<int>(objs.size());

    // Morphisms (x : A >-> X) => (y : A >-> Y): maps m : X -> Y, m . x = y.
    std::vector<MorId> mor_to_base;
    std::vector<std::unordered_map<MorId, MorId>> index(
        static_cast<std::size_t>(n_obj) * n_obj);
    for (ObjId ox = 0; ox < n_obj; ++ox)
        for (ObjId oy = 0; oy < n_obj; ++oy) {
            const MorId x = objs[ox], y = objs[oy];
            for (MorId m : base.hom(base.target(x), base.target(y)))
                if (base.compose(m, x) == y) {
                    MorId sm = b.add_morphism(ox, oy);
                    mor_to_base.push_back(m);
                    index[static_cast<std::size_t>(ox) * n_obj + oy]
                        .emplace(m, sm);
                }
        }
    for (ObjId o = 0; o < n_obj; ++o)
        b.set_identity(o, index[static_cast<std::size_t>(o) * n_obj + o].at(
                              base.identity(base.target(objs[o]))));
    {
        std::vector<std::vector<MorId>> by_target(n_obj);
        for (MorId s = 0; s < static_cast<MorId>(mor_to_base.size()); ++s)
            by_target[b.target(s)].push_back(s);
        for (MorId s2 = 0; s2 < static_cast<MorId>(mor_to_base.size()); ++s2)
            for (MorId s1 : by_target[b.source(s2)])
                b.set_compose(
                    s2, s1,
                    index[static_cast<std::size_t>(b.source(s1)) * n_obj +
                          b.target(s2)]
                        .at(base.compose(mor_to_base[s2], mor_to_base[s1])));
    }
    auto cat = std::move(b).build();
    WaldhausenStructure S(cat);
    S.initial = base_to_obj[base.identity(A)];
    for (MorId s = 0; s < cat->morphism_count(); ++s) {
        if (E.cof.contains(mor_to_base[s])) S.cof.insert(s);
        if (E.we.contains(mor_to_base[s])) S.we.insert(s);
    }
    out.S = std::move(S);
    out.obj_to_base = std::move(objs);
    out.mor_to_base = std::move(mor_to_base);
    return out;
}

// --- Structure isomorphism search ------------------------------------------

namespace {

struct IsoSearch {
    const WaldhausenStructure& A;
    const WaldhausenStructure& B;
    std::vector<ObjId> obj_map;   // A-object -> B-object
    std::vector<char> obj_used;   // B-object taken
    std::vector<MorId> mor_map;   // A-morphism -> B-morphism

    bool hom_compatible(ObjId a, ObjId b) const {
        // necessary conditions against already-assigned objects
        const FinCategory& ca = *A.cat;
        const FinCategory& cb = *B.cat;
        for (ObjId x = 0; x < ca.object_count(); ++x) {
            if (obj_map[x] == kNoObj) continue;
            if (ca.hom(a, x).size() != cb.hom(b, obj_map[x]).size()) return false;
            if (ca.hom(x, a).size() != cb.hom(obj_map[x], b).size()) return false;
        }
        return ca.hom(a, a).size() == cb.hom(b, b).size();
    }

    bool assign_morphisms() {
        // With objects fixed, match each hom-set by backtracking over
        // bijections that preserve classes; composition checked at the end.
        const FinCategory& ca = *A.cat;
        const FinCategory& cb = *B.cat;
        mor_map.assign(ca.morphism_count(), kNoMor);
        std::vector<char> used(cb.morphism_count(), 0);

        std::function<bool(MorId)> place = [&](MorId m) -> bool {
            if (m == ca.morphism_count()) return check_composition();
            const ObjId bs = obj_map[ca.source(m)];
            const ObjId bt = obj_map[ca.target(m)];
            const bool is_id = ca.identity(ca.source(m)) == m;
            for (MorId n : cb.hom(bs, bt)) {
                if (used[n]) continue;
                if (A.cof.contains(m) != B.cof.contains(n)) continue;
                if (A.we.contains(m) != B.we.contains(n)) continue;
                if (is_id != (cb.identity(bs) == n)) continue;
                used[n] = 1;
                mor_map[m] = n;
                if (place(m + 1)) return true;
                used[n] = 0;
                mor_map[m] = kNoMor;
            }
            return false;
        };
        return place(0);
    }

    bool check_composition() const {
        const FinCategory& ca = *A.cat;
        const FinCategory& cb = *B.cat;
        for (MorId g = 0; g < ca.morphism_count(); ++g)
            for (MorId f : ca.to(ca.source(g)))
                if (mor_map[ca.compose(g, f)] !=
                    cb.compose(mor_map[g], mor_map[f]))
                    return false;
        return true;
    }

    bool place_obj(ObjId a) {
        const FinCategory& ca = *A.cat;
        const FinCategory& cb = *B.cat;
        if (a == ca.object_count()) return assign_morphisms();
        for (ObjId b = 0; b < cb.object_count(); ++b) {
            if (obj_used[b]) continue;
            if (a == A.initial && b != B.initial) continue;
            if (!hom_compatible(a, b)) continue;
            obj_used[b] = 1;
            obj_map[a] = b;
            if (place_obj(a + 1)) return true;
            obj_used[b] = 0;
            obj_map[a] = kNoObj;
        }
        return false;
    }
};

}  // namespace

std::optional<Functor> find_structure_iso(const WaldhausenStructure& A,
                                          const WaldhausenStructure& B) {
    if (A.cat->object_count() != B.cat->object_count() ||
        A.cat->morphism_count() != B.cat->morphism_count() ||
        A.cof.size() != B.cof.size() || A.we.size() != B.we.size())
        return std::nullopt;
    IsoSearch s{A, B,
                std::vector<ObjId>(A.cat->object_count(), kNoObj),
                std::vector<char>(B.cat->object_count(), 0),
                {}};
    if (!s.place_obj(0)) return std::nullopt;
    Functor fun;
    fun.src = A.cat;
    fun.dst = B.cat;
    fun.on_obj = std::move(s.obj_map);
    fun.on_mor = std::move(s.mor_map);
    return fun;
}

}  // namespace wald
