#include "doctest.h"

#include <array>

#include "wald/backends.hpp"
#include "wald/fincat.hpp"

using namespace wald;

namespace {

// id of the pointed map given by its table text, e.g. "1->2 2->2"
MorId pm(const BackendCategory& bc, int src, int tgt, const char* text) {
    std::string err;
    auto m = bc.backend->decode(src, tgt, text, &err);
    REQUIRE_MESSAGE(m.has_value(), err);
    MorId id = bc.id_of(*m);
    REQUIRE(id != kNoMor);
    return id;
}

}  // namespace

TEST_CASE("one-object identity category is valid") {
    FinCategory::Builder b;
    ObjId x = b.add_object("x");
    MorId id = b.add_morphism(x, x, "id");
    b.set_identity(x, id);
    b.set_compose(id, id, id);
    auto cat = std::move(b).build();
    CHECK(validate_category(*cat).ok());
    CHECK(find_initial(*cat) == x);
}

TEST_CASE("free arrow category is valid") {
    FinCategory::Builder b;
    ObjId x = b.add_object("x");
    ObjId y = b.add_object("y");
    MorId idx = b.add_morphism(x, x, "id_x");
    MorId idy = b.add_morphism(y, y, "id_y");
    MorId f = b.add_morphism(x, y, "f");
    b.set_identity(x, idx);
    b.set_identity(y, idy);
    b.set_compose(idx, idx, idx);
    b.set_compose(idy, idy, idy);
    b.set_compose(f, idx, f);
    b.set_compose(idy, f, f);
    auto cat = std::move(b).build();
    CHECK(validate_category(*cat).ok());
    CHECK(find_initial(*cat) == x);  // hom(x, -) are singletons
    CHECK_FALSE(is_iso(*cat, f));
}

TEST_CASE("broken associativity is detected and names the triple") {
    // Monoid-like table on {id, a, v} with a deliberately inconsistent entry:
    // (a.a).a = v.a = a  but  a.(a.a) = a.v = v.
    FinCategory::Builder b;
    ObjId x = b.add_object("x");
    MorId id = b.add_morphism(x, x, "id");
    MorId a = b.add_morphism(x, x, "a");
    MorId v = b.add_morphism(x, x, "v");
    b.set_identity(x, id);
    for (MorId m : {id, a, v}) {
        b.set_compose(id, m, m);
        b.set_compose(m, id, m);
    }
    b.set_compose(a, a, v);
    b.set_compose(a, v, v);
    b.set_compose(v, a, a);
    b.set_compose(v, v, id);
    auto cat = std::move(b).build();
    auto rep = validate_category(*cat);
    REQUIRE_FALSE(rep.ok());
    bool found = false;
    for (const auto& issue : rep.issues)
        if (issue.mors == std::vector<MorId>{a, a, a}) found = true;
    CHECK(found);
}

TEST_CASE("missing composition entry is reported, not thrown") {
    FinCategory::Builder b;
    ObjId x = b.add_object("x");
    MorId id = b.add_morphism(x, x, "id");
    MorId a = b.add_morphism(x, x, "a");
    b.set_identity(x, id);
    b.set_compose(id, id, id);
    b.set_compose(id, a, a);
    b.set_compose(a, id, a);
    // no entry for a.a
    auto cat = std::move(b).build();
    auto rep = validate_category(*cat);
    CHECK_FALSE(rep.ok());
}

TEST_CASE("discrete two-object category has no initial object") {
    FinCategory::Builder b;
    ObjId x = b.add_object("x");
    ObjId y = b.add_object("y");
    MorId idx = b.add_morphism(x, x, "id_x");
    MorId idy = b.add_morphism(y, y, "id_y");
    b.set_identity(x, idx);
    b.set_identity(y, idy);
    b.set_compose(idx, idx, idx);
    b.set_compose(idy, idy, idy);
    auto cat = std::move(b).build();
    CHECK(validate_category(*cat).ok());
    CHECK_FALSE(find_initial(*cat).has_value());
}

TEST_CASE("pointed-set truncation: initial object and iso checks") {
    auto bc = pset_category(2);
    CHECK(validate_category(*bc.S.cat).ok());
    CHECK(find_initial(*bc.S.cat) == 0);  // the one-point set
    CHECK(is_iso(*bc.S.cat, bc.S.cat->identity(2)));
    CHECK_FALSE(is_iso(*bc.S.cat, pm(bc, 1, 2, "1->1")));
    // hom(2,2) has 9 pointed maps
    CHECK(bc.S.cat->hom(2, 2).size() == 9);
}

TEST_CASE("F_2 truncation: initial object and iso checks") {
    auto bc = vect_category(2, 2);
    CHECK(validate_category(*bc.S.cat).ok());
    CHECK(find_initial(*bc.S.cat) == 0);  // the zero space
    CHECK(bc.S.cat->hom(2, 2).size() == 16);
    std::string err;
    auto m = bc.backend->decode(2, 2, "1 1 / 0 1", &err);
    REQUIRE(m.has_value());
    CHECK(is_iso(*bc.S.cat, bc.id_of(*m)));
}

TEST_CASE("coproducts by cocone enumeration") {
    auto bc = pset_category(3);
    ColimitOracle oracle(bc.S.cat);

    SUBCASE("empty coproduct is the initial object") {
        auto cp = oracle.coproduct({});
        REQUIRE(cp.has_value());
        CHECK(cp->apex == 0);
    }
    SUBCASE("wedge of sizes 1 and 2 has size 3") {
        std::array<ObjId, 2> objs{1, 2};
        auto cp = oracle.coproduct(objs);
        REQUIRE(cp.has_value());
        CHECK(cp->apex == 3);
        REQUIRE(cp->injections.size() == 2);
        CHECK(bc.S.cat->source(cp->injections[0]) == 1);
        CHECK(bc.S.cat->source(cp->injections[1]) == 2);
        CHECK(bc.S.cat->target(cp->injections[0]) == 3);
    }
    SUBCASE("wedge exceeding the bound returns none") {
        std::array<ObjId, 2> objs{2, 2};
        CHECK_FALSE(oracle.coproduct(objs).has_value());
    }
}

TEST_CASE("F_2 coproduct of two lines is a plane with block injections") {
    auto bc = vect_category(2, 2);
    ColimitOracle oracle(bc.S.cat);
    std::array<ObjId, 2> objs{1, 1};
    auto cp = oracle.coproduct(objs);
    REQUIRE(cp.has_value());
    CHECK(cp->apex == 2);
    // the two injections are jointly surjective and independent
    CHECK(cp->injections[0] != cp->injections[1]);
}

TEST_CASE("pushouts by cocone enumeration") {
    auto bc = pset_category(2);
    auto cat = bc.S.cat;
    ColimitOracle oracle(cat);

    SUBCASE("pushout along the identity") {
        MorId g = pm(bc, 1, 2, "1->2");
        MorId id1 = cat->identity(1);
        auto po = oracle.pushout(id1, g);
        REQUIRE(po.has_value());
        CHECK(po->apex == 2);
        // the cocone (g, id) factors through the canonical pushout by an iso
        auto e = oracle.mediate_pushout(*po, g, cat->identity(2));
        REQUIRE(e.has_value());
        CHECK(is_iso(*cat, *e));
    }
    SUBCASE("wedge span size1 <- size0 -> size1 gives size 2") {
        MorId f = pm(bc, 0, 1, "-");
        auto po = oracle.pushout(f, f);
        REQUIRE(po.has_value());
        CHECK(po->apex == 2);
    }
    SUBCASE("span exceeding the bound returns none") {
        MorId f = pm(bc, 0, 2, "-");
        CHECK_FALSE(oracle.pushout(f, f).has_value());
    }
    SUBCASE("mediating morphism is found and unique") {
        MorId f = pm(bc, 0, 1, "-");
        auto po = oracle.pushout(f, f);
        REQUIRE(po.has_value());
        // collapse both legs onto size-1: cocone (1->1, 1->1)
        MorId q = pm(bc, 1, 1, "1->1");
        auto e = oracle.mediate_pushout(*po, q, q);
        REQUIRE(e.has_value());
        CHECK(cat->compose(*e, po->leg_from_f) == q);
        CHECK(cat->compose(*e, po->leg_from_g) == q);
    }
}

TEST_CASE("F_2 pushout of the zero span of two lines is a plane") {
    auto bc = vect_category(2, 2);
    ColimitOracle oracle(bc.S.cat);
    std::string err;
    auto z = bc.backend->decode(0, 1, "-", &err);
    REQUIRE(z.has_value());
    MorId f = bc.id_of(*z);
    auto po = oracle.pushout(f, f);
    REQUIRE(po.has_value());
    CHECK(po->apex == 2);
}

TEST_CASE("pushout symmetry: swapping the span swaps the legs up to iso") {
    auto bc = pset_category(2);
    auto cat = bc.S.cat;
    ColimitOracle oracle(cat);
    int spans = 0;
    for (MorId f = 0; f < cat->morphism_count(); ++f)
        for (MorId g : cat->from(cat->source(f))) {
            auto p1 = oracle.pushout(f, g);
            auto p2 = oracle.pushout(g, f);
            CHECK(p1.has_value() == p2.has_value());
            if (!p1 || !p2) continue;
            ++spans;
            auto iso = find_object_iso(*cat, p1->apex, p2->apex);
            REQUIRE(iso.has_value());
            // the swapped cocone factors through p1
            auto e = oracle.mediate_pushout(*p1, p2->leg_from_g,
                                            p2->leg_from_f);
            REQUIRE_MESSAGE(e.has_value(), "span " << f << "," << g);
            CHECK(is_iso(*cat, *e));
        }
    CHECK(spans > 50);
}

TEST_CASE("coproduct associativity up to isomorphism") {
    auto bc = pset_category(3);
    ColimitOracle oracle(bc.S.cat);
    // (1 + 1) + 1 vs 1 + (1 + 1): both must be size 3
    std::array<ObjId, 2> two{1, 1};
    auto left = oracle.coproduct(two);
    REQUIRE(left.has_value());
    std::array<ObjId, 2> outer{left->apex, 1};
    auto l2 = oracle.coproduct(outer);
    std::array<ObjId, 3> all{1, 1, 1};
    auto flat = oracle.coproduct(all);
    REQUIRE(l2.has_value());
    REQUIRE(flat.has_value());
    CHECK(find_object_iso(*bc.S.cat, l2->apex, flat->apex).has_value());
}

TEST_CASE("initial object is unique up to unique isomorphism") {
    auto bc = pset_category(2);
    auto cat = bc.S.cat;
    auto init = find_initial(*cat);
    REQUIRE(init.has_value());
    for (ObjId b = 0; b < cat->object_count(); ++b) {
        if (b == *init) continue;
        bool also_initial = true;
        for (ObjId c = 0; c < cat->object_count(); ++c)
            also_initial &= cat->hom(b, c).size() == 1;
        CHECK_FALSE(also_initial);
    }
}

TEST_CASE("functor validation catches a non-functor") {
    auto bc = pset_category(1);
    auto cat = bc.S.cat;
    Functor f;
    f.src = cat;
    f.dst = cat;
    f.on_obj.resize(cat->object_count());
    f.on_mor.resize(cat->morphism_count());
    for (ObjId a = 0; a < cat->object_count(); ++a) f.on_obj[a] = a;
    for (MorId m = 0; m < cat->morphism_count(); ++m) f.on_mor[m] = m;
    CHECK(validate_functor(f).ok());
    // break identity preservation
    MorId drop = pm(bc, 1, 1, "1->*");
    f.on_mor[cat->identity(1)] = drop;
    CHECK_FALSE(validate_functor(f).ok());
}
