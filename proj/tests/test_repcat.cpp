#include "doctest.h"

#include <algorithm>
#include <map>
#include <memory>

#include "wald/classes.hpp"
#include "wald/repcat.hpp"

using namespace wald;

namespace {

Quiver make(std::vector<int> vs, std::vector<std::pair<int, int>> edges) {
    Quiver q;
    q.vertices = std::move(vs);
    int id = 0;
    for (auto [s, t] : edges) q.arrows.push_back({id++, s, t});
    return q;
}

const Quiver a2 = make({1, 2}, {{1, 2}});
const Quiver fork_q = make({1, 2, 3}, {{1, 3}, {2, 3}});

std::shared_ptr<const Backend> pset2 = std::make_shared<PSetBackend>(2);

Representation rep(const Quiver& q, std::vector<int> on_v,
                   std::vector<BMor> on_a) {
    return Representation{q, std::move(on_v), std::move(on_a)};
}

}  // namespace

TEST_CASE("latching at a source vertex is the map out of zero") {
    const Backend& be = *pset2;
    auto X = rep(a2, {2, 2}, {be.identity(2)});
    auto L = latching(be, X, 1);
    CHECK(L.latch.cop.apex == 0);
    CHECK(L.latch.arrow_ids.empty());
    CHECK(L.phi.src == 0);
    CHECK(L.phi.tgt == 2);
    CHECK(L.phi_in_cof);
}

TEST_CASE("latching over a single arrow is the arrow map itself") {
    const Backend& be = *pset2;
    for (const BMor& m : be.hom(1, 2)) {
        if (!be.is_cof(m)) continue;
        auto X = rep(a2, {1, 2}, {m});
        auto L = latching(be, X, 2);
        CHECK(L.latch.cop.apex == 1);
        CHECK(L.phi == m);
        CHECK(L.phi_in_cof);
    }
}

TEST_CASE("latching over a double arrow is the block map of both columns") {
    VectBackend be(2, 2);
    Quiver dbl = make({1, 2}, {{1, 2}, {1, 2}});
    BMor e1{1, 2, {1, 0}};
    BMor e2{1, 2, {0, 1}};
    auto X = rep(dbl, {1, 2}, {e1, e2});
    auto L = latching(be, X, 2);
    CHECK(L.latch.cop.apex == 2);
    // the copair satisfies phi . iota_k = X_{alpha_k}
    for (int k = 0; k < 2; ++k)
        CHECK(be.compose(L.phi, L.latch.cop.injections[k]) == X.on_a[k]);
    // with columns e1, e2 the block map [e1 | e2] is the identity matrix
    CHECK(L.phi == BMor{2, 2, {1, 0, 0, 1}});
    CHECK(L.phi_in_cof);
}

TEST_CASE("representations of a stage extension correspond to families") {
    const Backend& be = *pset2;
    auto cat = materialize_rep_category(pset2, a2, 2);
    Quiver q_lo = make({1}, {});
    int seen = 0;
    for (const Representation& X : cat.objects) {
        auto fam = extract_family(be, X, q_lo);
        REQUIRE(fam.size() == 1);
        auto A = rep(q_lo, {X.on_v[0]}, {});
        CHECK(rep_from_family(be, A, a2, fam) == X);
        ++seen;
    }
    // counting both sides of the correspondence: one representation per
    // (object at vertex 1, cofibration out of it)
    int families = 0;
    for (int a = 0; a <= 2; ++a)
        for (int b = 0; b <= 2; ++b)
            for (const BMor& m : be.hom(a, b))
                if (be.is_cof(m)) ++families;
    CHECK(seen == families);
    CHECK(static_cast<int>(cat.objects.size()) == families);
}

TEST_CASE("rep_from_family rejects bad families") {
    const Backend& be = *pset2;
    auto A = rep(make({1}, {}), {1}, {});
    CHECK_THROWS_AS(rep_from_family(be, A, a2, {}), std::invalid_argument);
    BMor non_cof{1, 1, {0}};  // sends the point to the basepoint
    CHECK_THROWS_AS(rep_from_family(be, A, a2, {{2, non_cof}}),
                    std::invalid_argument);
}

TEST_CASE("rho at a source vertex is the component itself") {
    const Backend& be = *pset2;
    auto cat = materialize_rep_category(pset2, a2, 2);
    for (MorId m = 0; m < cat.S.cat->morphism_count(); ++m) {
        const auto& X = cat.objects[cat.S.cat->source(m)];
        const auto& Y = cat.objects[cat.S.cat->target(m)];
        auto r = rho(be, X, Y, cat.morphisms[m], 1);
        CHECK(r.rho == cat.morphisms[m].components[0]);
    }
}

TEST_CASE("rho of an identity is an isomorphism at every vertex") {
    const Backend& be = *pset2;
    auto cat = materialize_rep_category(pset2, a2, 2);
    for (ObjId a = 0; a < cat.S.cat->object_count(); ++a) {
        const MorId id = cat.S.cat->identity(a);
        for (int v : a2.vertices) {
            auto r = rho(be, cat.objects[a], cat.objects[a],
                         cat.morphisms[id], v);
            CHECK(be.is_we(r.rho));
            CHECK(be.is_cof(r.rho));
        }
    }
}

TEST_CASE("rho over F_2 against a brute-force universal-map search") {
    VectBackend be(2, 2);
    BMor e1{1, 2, {1, 0}};
    BMor id2 = be.identity(2);
    auto X = rep(a2, {1, 2}, {e1});
    auto Y = rep(a2, {2, 2}, {id2});
    RepMorphism f{{e1, id2}};
    REQUIRE(is_natural(be, X, Y, f));

    auto r = rho(be, X, Y, f, 2);
    CHECK(r.po.apex == 3);
    // the mediating map is the unique solution of the two cocone equations
    int solutions = 0;
    for (const BMor& g : be.hom(3, 2))
        if (be.compose(g, r.po.from_f) == f.components[1] &&
            be.compose(g, r.po.from_g) == latching(be, Y, 2).phi) {
            ++solutions;
            CHECK(g == r.rho);
        }
    CHECK(solutions == 1);
    // dim 3 -> dim 2 cannot be injective
    CHECK_FALSE(be.is_cof(r.rho));
    auto c = classify(be, X, Y, f);
    CHECK_FALSE(c.is_cof);
    CHECK_FALSE(c.is_we);

    // the verdict does not depend on the pushout representative: transport
    // the apex along any self-isomorphism and re-derive the mediating map
    for (const BMor& t : be.hom(3, 3)) {
        if (!be.is_we(t)) continue;
        BPushout po2{3, be.compose(t, r.po.from_f), be.compose(t, r.po.from_g)};
        int found = 0;
        for (const BMor& g : be.hom(3, 2))
            if (be.compose(g, po2.from_f) == f.components[1] &&
                be.compose(g, po2.from_g) == latching(be, Y, 2).phi) {
                ++found;
                CHECK(be.is_cof(g) == be.is_cof(r.rho));
                CHECK(be.is_we(g) == be.is_we(r.rho));
            }
        CHECK(found == 1);
    }
}

TEST_CASE("weak equivalences are exactly the componentwise ones") {
    auto cat = materialize_rep_category(pset2, a2, 2);
    const Backend& be = *pset2;
    for (MorId m = 0; m < cat.S.cat->morphism_count(); ++m) {
        bool allw = true;
        for (const BMor& c : cat.morphisms[m].components)
            allw = allw && be.is_we(c);
        CHECK(cat.S.we.contains(m) == allw);
        CHECK(cat.S.we.contains(cat.S.cat->identity(cat.S.cat->source(m))));
    }
}

TEST_CASE("latching maps are cofibrations on the chain but not on the fork") {
    const Backend& be = *pset2;
    auto chain_cat = materialize_rep_category(pset2, a2, 2);
    for (const Representation& X : chain_cat.objects)
        for (int v : a2.vertices) CHECK(latching(be, X, v).phi_in_cof);

    // two arrows with overlapping images: the copair out of the two-point
    // latching object collapses onto the one-point target
    BMor inc = be.hom(1, 1)[1];  // the identity-like injection
    REQUIRE(be.is_cof(inc));
    auto X = rep(fork_q, {1, 1, 1}, {inc, inc});
    auto L = latching(be, X, 3);
    CHECK(L.latch.cop.apex == 2);
    CHECK_FALSE(L.phi_in_cof);
    CHECK_FALSE(be.is_cof(L.phi));

    // cross-check with the lifting solver in the ambient category: a map in
    // C has the left lifting property against all of C-box, this one does not
    auto ambient = pset_category(2);
    auto cbox = rlp_class(ambient.S.cof);
    const MorId bad = ambient.id_of(L.phi);
    REQUIRE(bad != kNoMor);
    bool llp_all = true;
    for (MorId r : cbox.members())
        llp_all = llp_all && has_llp(*ambient.S.cat, bad, r);
    CHECK_FALSE(llp_all);
    for (const Representation& Y : chain_cat.objects) {
        const MorId good = ambient.id_of(latching(be, Y, 2).phi);
        REQUIRE(good != kNoMor);
        for (MorId r : cbox.members())
            CHECK(has_llp(*ambient.S.cat, good, r));
    }
}

TEST_CASE("trivial stage restriction is an isomorphism with identity lifts") {
    Quiver q = make({1}, {});
    RootedSequence rs;
    rs.stages = {{}, {1}, {1}};
    rs.zeta = 2;
    rs.complete = true;
    auto ro = restriction_opfib(pset2, q, rs, 1, 2);
    CHECK(ro.new_vertices.empty());
    CHECK(ro.op.missing_entries == 0);
    CHECK(ro.defects.empty());
    CHECK(ro.lower.S.cat->object_count() == ro.upper.S.cat->object_count());
    for (const auto& [key, entry] : ro.op.cleavage) {
        CHECK(is_cocartesian(ro.op.p, entry.lambda));
        // with no new vertices the lifting is u itself
        CHECK(ro.op.p.mor(entry.lambda) == key.first);
        CHECK(ro.upper.morphisms[entry.lambda].components ==
              ro.lower.morphisms[key.first].components);
    }
}

TEST_CASE("stage restriction of the arrow quiver") {
    auto rs = rooted_sequence(a2);
    auto ro = restriction_opfib(pset2, a2, rs, 1, 2);
    REQUIRE(ro.new_vertices == std::vector<int>{2});
    CHECK(ro.defects.empty());
    CHECK(ro.op.missing_entries > 0);  // pushouts past the bound
    CHECK(!ro.op.cleavage.empty());
    for (const auto& [key, entry] : ro.op.cleavage)
        CHECK(is_cocartesian(ro.op.p, entry.lambda));

    SUBCASE("the vertical part of any morphism is the rho family") {
        const Backend& be = *pset2;
        int checked = 0;
        for (MorId m = 0; m < ro.upper.S.cat->morphism_count(); ++m) {
            auto fm = factor(ro.op, m);
            if (!fm) continue;
            const auto& X = ro.upper.objects[ro.upper.S.cat->source(m)];
            const auto& Y = ro.upper.objects[ro.upper.S.cat->target(m)];
            auto r = rho(be, X, Y, ro.upper.morphisms[m], 2);
            CHECK(ro.upper.morphisms[fm->fiber_part].components[1] == r.rho);
            ++checked;
        }
        CHECK(checked > 20);
    }
}

TEST_CASE("the fiber over A is the category of cofibrations under A_1") {
    auto rs = rooted_sequence(a2);
    auto ro = restriction_opfib(pset2, a2, rs, 1, 2);
    auto ambient = pset_category(2);
    const Backend& be = *pset2;
    for (ObjId A = 0; A < ro.lower.S.cat->object_count(); ++A) {
        auto fi = fiber_iso(ro, A, ambient);
        REQUIRE_MESSAGE(fi.ok, (fi.problems.empty() ? "" : fi.problems[0]));
        CHECK(fi.skipped_at_boundary == 0);
        // count the cofibrations out of A_1 within the bound directly
        int cofs = 0;
        for (int b = 0; b <= 2; ++b)
            for (const BMor& m : be.hom(ro.lower.objects[A].on_v[0], b))
                if (be.is_cof(m)) ++cofs;
        CHECK(fi.fib.cat->object_count() == cofs);
        CHECK(fi.prod.S.cat->object_count() == cofs);
    }
}

TEST_CASE("fiber comparison with no new vertices is the terminal product") {
    Quiver q = make({1}, {});
    RootedSequence rs;
    rs.stages = {{}, {1}, {1}};
    rs.zeta = 2;
    rs.complete = true;
    auto ro = restriction_opfib(pset2, q, rs, 1, 2);
    auto ambient = pset_category(2);
    auto fi = fiber_iso(ro, 0, ambient);
    CHECK(fi.ok);
    CHECK(fi.prod.S.cat->object_count() == 1);
    CHECK(fi.prod.S.cat->morphism_count() == 1);
    CHECK(fi.fib.cat->object_count() == 1);
}

TEST_CASE("representations of a single vertex recover the base structure") {
    Quiver q = make({1}, {});
    auto r = rep_waldhausen(pset2, q, 2, 2);
    CHECK(r.axioms.all_pass());
    CHECK(r.stages_ok);
    CHECK(r.problems.empty());
    auto base = pset_category(2);
    CHECK(find_structure_iso(r.cat.S, base.S).has_value());
}

TEST_CASE("the arrow quiver carries a verified structure with agreeing stages") {
    auto r = rep_waldhausen(pset2, a2, 2, 2);
    CHECK(r.axioms.all_pass());
    CHECK(r.stages_ok);
    CHECK(r.problems.empty());
    CHECK(r.stage_instances > 0);
    CHECK(r.stage_skipped > 0);  // truncated cleavage entries
}

TEST_CASE("rep_waldhausen rejects a quiver that is not left rooted") {
    CHECK_THROWS_AS(
        rep_waldhausen(pset2, make({1}, {{1, 1}}), 2, 2),
        std::invalid_argument);
}

TEST_CASE("the fork fails (C2): latching maps need not be cofibrations") {
    auto r = rep_waldhausen(pset2, fork_q, 2, 2);
    REQUIRE(r.axioms.check("C2"));
    CHECK(r.axioms.check("C2")->status == CheckStatus::fail);
    // isomorphism axioms are untouched by the defect
    CHECK(r.axioms.check("C1")->status == CheckStatus::pass);
    CHECK(r.axioms.check("W1")->status == CheckStatus::pass);
    CHECK(r.axioms.check("initial")->status == CheckStatus::pass);
    // the witness is a zero-to-X morphism whose rho at the join vertex is
    // the non-injective latching map
    REQUIRE(!r.axioms.check("C2")->witnesses.empty());
    CHECK_FALSE(r.problems.empty());
}
