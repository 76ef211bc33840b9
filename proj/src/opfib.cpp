#include "wald/opfib.hpp"

#include <stdexcept>
#include <string>

namespace wald {

FiberCategory fiber(const Functor& p, ObjId A) {
    const FinCategory& T = *p.src;
    const MorId idA = p.dst->identity(A);

    FiberCategory F;
    F.base_obj = A;
    F.total_to_obj.assign(T.object_count(), kNoObj);
    F.total_to_mor.assign(T.morphism_count(), kNoMor);

    FinCategory::Builder b;
    for (ObjId x = 0; x < T.object_count(); ++x)
        if (p.obj(x) == A) {
            F.total_to_obj[x] = b.add_object(std::string(T.object_label(x)));
            F.obj_to_total.push_back(x);
        }
    for (MorId m = 0; m < T.morphism_count(); ++m)
        if (p.mor(m) == idA) {
            F.total_to_mor[m] =
                b.add_morphism(F.total_to_obj[T.source(m)],
                               F.total_to_obj[T.target(m)],
                               std::string(T.morphism_label(m)));
            F.mor_to_total.push_back(m);
        }
    for (ObjId x : F.obj_to_total)
        b.set_identity(F.total_to_obj[x], F.total_to_mor[T.identity(x)]);
    for (MorId g : F.mor_to_total)
        for (MorId f : F.mor_to_total)
            if (T.composable(g, f))
                b.set_compose(F.total_to_mor[g], F.total_to_mor[f],
                              F.total_to_mor[T.compose(g, f)]);
    F.cat = std::move(b).build();
    return F;
}

bool is_cocartesian(const Functor& p, MorId f) {
    const FinCategory& T = *p.src;
    const FinCategory& B = *p.dst;
    const ObjId X = T.source(f);
    const ObjId Y = T.target(f);
    const MorId pf = p.mor(f);
    for (MorId g : T.from(X)) {
        const MorId pg = p.mor(g);
        const ObjId Z = T.target(g);
        for (MorId v : B.hom(B.target(pf), p.obj(Z))) {
            if (B.compose(v, pf) != pg) continue;
            int count = 0;
            for (MorId h : T.hom(Y, Z))
                if (p.mor(h) == v && T.compose(h, f) == g) ++count;
            if (count != 1) return false;
        }
    }
    return true;
}

std::optional<FactoredMorphism> factor(const OpfibrationData& op, MorId f) {
    const FinCategory& T = *op.p.src;
    const MorId u = op.p.mor(f);
    const ObjId X = T.source(f);
    const CleavageEntry* e = op.entry(u, X);
    if (!e) return std::nullopt;
    const ObjId tgt = T.target(f);
    const MorId vert = op.p.dst->identity(op.p.obj(tgt));
    MorId found = kNoMor;
    int count = 0;
    for (MorId h : T.hom(e->lifted, tgt))
        if (op.p.mor(h) == vert && T.compose(h, e->lambda) == f) {
            found = h;
            ++count;
        }
    if (count != 1)
        throw std::logic_error(
            "invalid cleavage: morphism " + std::to_string(f) + " has " +
            std::to_string(count) + " vertical factorizations");
    return FactoredMorphism{f, u, e->lambda, found};
}

std::optional<Functor> reindex(const OpfibrationData& op, MorId u,
                               const FiberCategory& FA,
                               const FiberCategory& FB) {
    const FinCategory& T = *op.p.src;
    Functor F;
    F.src = FA.cat;
    F.dst = FB.cat;
    F.on_obj.assign(FA.cat->object_count(), kNoObj);
    F.on_mor.assign(FA.cat->morphism_count(), kNoMor);
    for (ObjId X = 0; X < FA.cat->object_count(); ++X) {
        const CleavageEntry* e = op.entry(u, FA.obj_to_total[X]);
        if (!e) return std::nullopt;
        F.on_obj[X] = FB.total_to_obj[e->lifted];
    }
    for (MorId k = 0; k < FA.cat->morphism_count(); ++k) {
        const MorId km = FA.mor_to_total[k];
        const CleavageEntry* et = op.entry(u, T.target(km));
        if (!et) return std::nullopt;
        auto fm = factor(op, T.compose(et->lambda, km));
        if (!fm) return std::nullopt;
        F.on_mor[k] = FB.total_to_mor[fm->fiber_part];
    }
    return F;
}

std::vector<FiberStructure> fibers_from_total(
    const Functor& p, const WaldhausenStructure& total) {
    std::vector<FiberStructure> out;
    for (ObjId A = 0; A < p.dst->object_count(); ++A) {
        FiberStructure fs;
        fs.fib = fiber(p, A);
        fs.S = WaldhausenStructure(fs.fib.cat);
        for (MorId k = 0; k < fs.fib.cat->morphism_count(); ++k) {
            const MorId m = fs.fib.mor_to_total[k];
            if (total.cof.contains(m)) fs.S.cof.insert(k);
            if (total.we.contains(m)) fs.S.we.insert(k);
            if (!total.cof_known(m)) fs.S.mark_cof_unknown(k);
            if (!total.we_known(m)) fs.S.mark_we_unknown(k);
        }
        fs.S.initial = find_initial(*fs.fib.cat).value_or(kNoObj);
        out.push_back(std::move(fs));
    }
    return out;
}

void attach_span_guards(std::vector<FiberStructure>& fibers,
                        std::shared_ptr<const FinCategory> ambient,
                        std::function<MorId(MorId)> project) {
    auto oracle = std::make_shared<ColimitOracle>(std::move(ambient));
    for (auto& fs : fibers) {
        // copy the per-fiber lookup tables; the guard outlives this call
        auto to_total = fs.fib.mor_to_total;
        fs.guard = [oracle, project, to_total](MorId f, MorId g) {
            return oracle->pushout(project(to_total[f]), project(to_total[g]))
                .has_value();
        };
    }
}

OpfibCheckReport check_waldhausen_opfib(
    const OpfibrationData& op, const std::vector<FiberStructure>& fibers) {
    OpfibCheckReport rep;
    auto problem = [&](std::string what) {
        rep.ok = false;
        rep.problems.push_back(std::move(what));
    };

    const FinCategory& T = *op.p.src;
    const FinCategory& B = *op.p.dst;
    if (!validate_functor(op.p).ok()) problem("projection is not a functor");
    rep.skipped_at_boundary += op.missing_entries;

    // cleavage entries lift correctly and are cocartesian
    for (const auto& [key, e] : op.cleavage) {
        const auto [u, X] = key;
        if (T.source(e.lambda) != X || T.target(e.lambda) != e.lifted ||
            op.p.mor(e.lambda) != u || op.p.obj(e.lifted) != B.target(u)) {
            problem("cleavage entry (" + std::to_string(u) + ", " +
                    std::to_string(X) + ") is not a lifting above its key");
            continue;
        }
        if (!is_cocartesian(op.p, e.lambda))
            problem("cleavage entry (" + std::to_string(u) + ", " +
                    std::to_string(X) + ") is not cocartesian");
    }

    // fibers are Waldhausen
    std::vector<ColimitOracle> oracles;
    oracles.reserve(fibers.size());
    for (const auto& fs : fibers) oracles.emplace_back(fs.fib.cat);
    for (const auto& fs : fibers) {
        auto frep = verify_waldhausen(fs.S, 4'000'000'000LL, fs.guard);
        if (!frep.all_pass())
            for (const auto& c : frep.checks)
                if (c.status == CheckStatus::fail)
                    problem("fiber " + std::to_string(fs.fib.base_obj) +
                            " fails axiom " + c.axiom);
        rep.fiber_reports.emplace_back(fs.fib.base_obj, std::move(frep));
    }

    // reindexing functors are exact
    for (MorId u = 0; u < B.morphism_count(); ++u) {
        const auto& FA = fibers[B.source(u)];
        const auto& FB = fibers[B.target(u)];
        const std::string tag = "reindex along " + std::to_string(u);
        std::optional<Functor> F;
        try {
            F = reindex(op, u, FA.fib, FB.fib);
        } catch (const std::logic_error& e) {
            problem(tag + ": " + e.what());
            continue;
        }
        if (!F) {
            ++rep.skipped_at_boundary;
            continue;
        }
        if (!validate_functor(*F).ok()) {
            problem(tag + " is not a functor");
            continue;
        }
        if (FA.S.initial != kNoObj && FB.S.initial != kNoObj &&
            !find_object_iso(*FB.fib.cat, F->obj(FA.S.initial), FB.S.initial))
            problem(tag + " does not preserve the initial object");
        for (MorId k = 0; k < FA.fib.cat->morphism_count(); ++k) {
            if (FA.S.cof.contains(k) && FA.S.cof_known(k)) {
                if (!FB.S.cof_known(F->mor(k)))
                    ++rep.skipped_at_boundary;
                else if (!FB.S.cof.contains(F->mor(k)))
                    problem(tag + " drops cofibration " + std::to_string(k));
            }
            if (FA.S.we.contains(k) && FA.S.we_known(k)) {
                if (!FB.S.we_known(F->mor(k)))
                    ++rep.skipped_at_boundary;
                else if (!FB.S.we.contains(F->mor(k)))
                    problem(tag + " drops weak equivalence " +
                            std::to_string(k));
            }
        }
        // pushout squares along cofibrations are preserved
        ColimitOracle& oa = oracles[B.source(u)];
        ColimitOracle& ob = oracles[B.target(u)];
        for (MorId f : FA.S.cof.members())
            for (MorId g : FA.fib.cat->from(FA.fib.cat->source(f))) {
                if ((FA.guard && !FA.guard(f, g)) ||
                    (FB.guard && !FB.guard(F->mor(f), F->mor(g)))) {
                    ++rep.skipped_at_boundary;
                    continue;
                }
                auto po = oa.pushout(f, g);
                if (!po) {
                    ++rep.skipped_at_boundary;
                    continue;
                }
                auto pob = ob.pushout(F->mor(f), F->mor(g));
                if (!pob) {
                    ++rep.skipped_at_boundary;
                    continue;
                }
                auto e = ob.mediate_pushout(*pob, F->mor(po->leg_from_f),
                                            F->mor(po->leg_from_g));
                if (!e || !is_iso(*FB.fib.cat, *e))
                    problem(tag + " breaks the pushout of span (" +
                            std::to_string(f) + ", " + std::to_string(g) +
                            ")");
            }
    }
    return rep;
}

WaldhausenStructure total_structure(const OpfibrationData& op,
                                    const WaldhausenStructure& base,
                                    const std::vector<FiberStructure>& fibers) {
    const FinCategory& T = *op.p.src;
    WaldhausenStructure S(op.p.src);
    for (MorId f = 0; f < T.morphism_count(); ++f) {
        const MorId u = op.p.mor(f);
        const bool base_c = base.cof.contains(u);
        const bool base_w = base.we.contains(u);
        auto fm = factor(op, f);
        if (!fm) {
            // certainly out when the base class already excludes it
            if (base_c) S.mark_cof_unknown(f);
            if (base_w) S.mark_we_unknown(f);
            continue;
        }
        const auto& FB = fibers[op.p.obj(T.target(f))];
        const MorId k = FB.fib.total_to_mor[fm->fiber_part];
        if (base_c) {
            if (!FB.S.cof_known(k))
                S.mark_cof_unknown(f);
            else if (FB.S.cof.contains(k))
                S.cof.insert(f);
        }
        if (base_w) {
            if (!FB.S.we_known(k))
                S.mark_we_unknown(f);
            else if (FB.S.we.contains(k))
                S.we.insert(f);
        }
    }
    const auto& F0 = fibers[base.initial];
    if (F0.S.initial != kNoObj)
        S.initial = F0.fib.obj_to_total[F0.S.initial];
    return S;
}

CoherenceReport check_cleavage_coherence(const OpfibrationData& op) {
    CoherenceReport rep;
    const FinCategory& T = *op.p.src;
    const FinCategory& B = *op.p.dst;
    for (const auto& [key, e1] : op.cleavage) {
        const auto [u, X] = key;
        for (MorId v : B.from(B.target(u))) {
            const CleavageEntry* e2 = op.entry(v, e1.lifted);
            const CleavageEntry* e3 = op.entry(B.compose(v, u), X);
            if (!e2 || !e3) {
                ++rep.skipped_at_boundary;
                continue;
            }
            const MorId mu = T.compose(e2->lambda, e1.lambda);
            const MorId vert = op.p.dst->identity(B.target(v));
            int isos = 0;
            for (MorId t : T.hom(e2->lifted, e3->lifted))
                if (op.p.mor(t) == vert && T.compose(t, mu) == e3->lambda &&
                    is_iso(T, t))
                    ++isos;
            if (isos != 1) {
                rep.ok = false;
                rep.problems.push_back(
                    "liftings along " + std::to_string(u) + " then " +
                    std::to_string(v) + " at object " + std::to_string(X) +
                    " admit " + std::to_string(isos) +
                    " vertical comparison isomorphisms");
            }
            ++rep.checked;
        }
    }
    return rep;
}

OpfibrationData perturb_cleavage(const OpfibrationData& op, int seed) {
    if (seed == 0) return op;
    const FinCategory& T = *op.p.src;
    OpfibrationData out;
    out.p = op.p;
    out.missing_entries = op.missing_entries;
    for (const auto& [key, e] : op.cleavage) {
        const auto [u, X] = key;
        CleavageEntry ne = e;
        if ((u * 31 + X) % 3 == (seed - 1) % 3) {
            const MorId vert = op.p.dst->identity(op.p.obj(e.lifted));
            for (MorId t : T.from(e.lifted)) {
                if (t == T.identity(e.lifted)) continue;
                if (op.p.mor(t) != vert || !is_iso(T, t)) continue;
                ne.lifted = T.target(t);
                ne.lambda = T.compose(t, e.lambda);
                break;
            }
        }
        out.cleavage.emplace(key, ne);
    }
    return out;
}

CodomainOpfib codomain_opfib(const WaldhausenStructure& E) {
    CodomainOpfib r;
    r.m = mor_structure(E);
    const FinCategory& T = *r.m.S.cat;
    Functor p;
    p.src = r.m.S.cat;
    p.dst = E.cat;
    p.on_obj.resize(T.object_count());
    p.on_mor.resize(T.morphism_count());
    for (ObjId X = 0; X < T.object_count(); ++X)
        p.on_obj[X] = E.cat->target(r.m.obj_to_base[X]);
    for (MorId s = 0; s < T.morphism_count(); ++s)
        p.on_mor[s] = r.m.square_of[s].bot;
    r.op.p = std::move(p);
    for (MorId u = 0; u < E.cat->morphism_count(); ++u) {
        const ObjId A = E.cat->source(u);
        for (ObjId X = 0; X < T.object_count(); ++X) {
            const MorId f = r.m.obj_to_base[X];
            if (E.cat->target(f) != A) continue;
            const ObjId lifted = r.m.base_to_obj[E.cat->compose(u, f)];
            const MorId lambda = r.m.find_square(
                X, lifted, E.cat->identity(E.cat->source(f)), u);
            if (lifted == kNoObj || lambda == kNoMor)
                throw std::logic_error("codomain cleavage square missing");
            r.op.cleavage.emplace(std::pair{u, X},
                                  CleavageEntry{lifted, lambda});
        }
    }
    return r;
}

DomainOpfib domain_opfib(const WaldhausenStructure& E) {
    DomainOpfib r;
    r.cm = comor_structure(E);
    const FinCategory& T = *r.cm.m.S.cat;
    Functor p;
    p.src = r.cm.m.S.cat;
    p.dst = E.cat;
    p.on_obj.resize(T.object_count());
    p.on_mor.resize(T.morphism_count());
    for (ObjId X = 0; X < T.object_count(); ++X)
        p.on_obj[X] = E.cat->source(r.cm.m.obj_to_base[X]);
    for (MorId s = 0; s < T.morphism_count(); ++s)
        p.on_mor[s] = r.cm.m.square_of[s].top;
    r.op.p = std::move(p);
    ColimitOracle oracle(E.cat);
    for (MorId u = 0; u < E.cat->morphism_count(); ++u) {
        const ObjId A = E.cat->source(u);
        for (ObjId X = 0; X < T.object_count(); ++X) {
            const MorId f = r.cm.m.obj_to_base[X];
            if (E.cat->source(f) != A) continue;
            auto po = oracle.pushout(f, u);
            if (!po) {
                ++r.op.missing_entries;
                continue;
            }
            const ObjId lifted = r.cm.m.base_to_obj[po->leg_from_g];
            const MorId lambda =
                lifted == kNoObj
                    ? kNoMor
                    : r.cm.m.find_square(X, lifted, u, po->leg_from_f);
            if (lifted == kNoObj || lambda == kNoMor)
                throw std::logic_error(
                    "domain cleavage: cobase change is not a cofibration");
            r.op.cleavage.emplace(std::pair{u, X},
                                  CleavageEntry{lifted, lambda});
        }
    }
    return r;
}

}  // namespace wald
