#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "wald/doc.hpp"

using namespace wald;

namespace {

struct Run {
    int exit_code;
    std::string out;
};

std::string bin() {
    const char* b = std::getenv("WALDCHECK_BIN");
    REQUIRE_MESSAGE(b, "WALDCHECK_BIN must point at the waldcheck binary");
    return b;
}

std::string fx(const std::string& name) {
    const char* d = std::getenv("WALDCHECK_FIXTURES");
    REQUIRE_MESSAGE(d, "WALDCHECK_FIXTURES must point at the fixtures dir");
    return std::string(d) + "/" + name;
}

Run run(const std::string& args) {
    const std::string cmd = bin() + " " + args + " 2>&1";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p);
    std::string out;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
    const int status = pclose(p);
    return {WEXITSTATUS(status), out};
}

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("verify-waldhausen passes on the bundled categories") {
    for (const char* f : {"pset2.cat", "pset3.cat"}) {
        auto r = run("verify-waldhausen " + fx(f));
        CHECK(r.exit_code == 0);
        CHECK(contains(r.out, "overall: pass"));
        CHECK(contains(r.out, "W2: pass"));
    }
}

TEST_CASE("verify-waldhausen names the defect in the broken fixture") {
    auto r = run("verify-waldhausen " + fx("broken-c1.cat"));
    CHECK(r.exit_code == 1);
    CHECK(contains(r.out, "C1: fail"));
    CHECK(contains(r.out, "isomorphism not a cofibration mors=[21]"));
}

TEST_CASE("budget zero is reported as inconclusive, exit 2") {
    auto r = run("--budget 0 verify-waldhausen " + fx("pset2.cat"));
    CHECK(r.exit_code == 2);
    CHECK(contains(r.out, "overall: inconclusive"));
}

TEST_CASE("records format emits one machine line per axiom") {
    auto r = run("--format records verify-waldhausen " + fx("pset2.cat"));
    CHECK(r.exit_code == 0);
    CHECK(contains(r.out, "axiom=C1 status=pass"));
    CHECK(contains(r.out, "overall=pass"));
}

TEST_CASE("parse errors carry a line number and exit 64") {
    const std::string path = "/tmp/waldcheck-bad.cat";
    std::ofstream(path) << "kind: category\nOBJECTS\nfoo | x\nEND\n";
    auto r = run("verify-waldhausen " + path);
    CHECK(r.exit_code == 64);
    CHECK(contains(r.out, "line 3"));
}

TEST_CASE("check-wfs confirms the factorization system") {
    auto r = run("check-wfs " + fx("pset2.cat"));
    CHECK(r.exit_code == 0);
    CHECK(contains(r.out, "rlp_matches: yes"));
    CHECK(contains(r.out, "llp_matches: yes"));
    CHECK(contains(r.out, "wfs: yes"));
}

TEST_CASE("quiver rooted-seq prints the stages of the chain") {
    auto r = run("quiver rooted-seq " + fx("chain3.qv"));
    CHECK(r.exit_code == 0);
    CHECK(contains(r.out, "V_1: 1\n"));
    CHECK(contains(r.out, "V_2: 1 2\n"));
    CHECK(contains(r.out, "V_3: 1 2 3\n"));
    CHECK(contains(r.out, "zeta: 3"));
}

TEST_CASE("quiver is-left-rooted") {
    auto c = run("quiver is-left-rooted " + fx("cycle3.qv"));
    CHECK(c.exit_code == 0);
    CHECK(c.out == "false\n");
    auto e = run("quiver is-left-rooted " + fx("empty.qv"));
    CHECK(e.exit_code == 0);
    CHECK(e.out == "true\n");
}

TEST_CASE("quiver subquiver emits a parseable stage quiver") {
    auto r = run("quiver subquiver " + fx("chain3.qv") + " --stage 2");
    CHECK(r.exit_code == 0);
    CHECK(contains(r.out, "VERTICES\n1 2\n"));
    CHECK(contains(r.out, "0 | 1 2"));
    auto d = parse_document(r.out);
    CHECK(std::get<QuiverDoc>(d).q.arrows.size() == 1);
    auto bad = run("quiver subquiver " + fx("chain3.qv") + " --stage 9");
    CHECK(bad.exit_code == 65);
}

TEST_CASE("rep-classify reproduces the F_2 comparison example") {
    auto r = run("rep-classify " + fx("a2-vect.rm") + " --quiver " +
                 fx("a2.qv"));
    CHECK(r.exit_code == 0);
    CHECK(contains(r.out, "apex 3"));
    CHECK(contains(r.out, "cofibration: no"));
    CHECK(contains(r.out, "weak-equivalence: no"));
}

TEST_CASE("rep-classify of an identity says yes twice") {
    auto r = run("rep-classify " + fx("a2-vect-id.rm") + " --quiver " +
                 fx("a2.qv"));
    CHECK(r.exit_code == 0);
    CHECK(contains(r.out, "cofibration: yes"));
    CHECK(contains(r.out, "weak-equivalence: yes"));
}

TEST_CASE("rep-classify rejects non-natural components, naming the arrow") {
    auto r = run("rep-classify " + fx("a2-vect-nonnatural.rm") + " --quiver " +
                 fx("a2.qv"));
    CHECK(r.exit_code == 65);
    CHECK(contains(r.out, "naturality fails at arrow 0"));
}

TEST_CASE("total reproduces the classical structures") {
    for (const char* builtin : {"codomain", "domain"}) {
        auto r = run(std::string("total ") + builtin + " --backend pset:2");
        CHECK(r.exit_code == 0);
        CHECK(contains(r.out, "opfibration_check: yes"));
        CHECK(contains(r.out, "identical: yes"));
        CHECK(contains(r.out, "overall: pass"));
    }
}

TEST_CASE("total flags the corrupted cleavage fixture") {
    auto r = run("total " + fx("corrupted-cleavage.opf"));
    CHECK(r.exit_code == 1);
    CHECK(contains(r.out, "opfibration_check: no"));
    CHECK(contains(r.out, "cleavage entry (0, 0) is not cocartesian"));
}

TEST_CASE("fiber-iso counts both sides of the comparison") {
    auto r = run("fiber-iso " + fx("a2.qv") +
                 " --backend pset:2 --stage 1 --object 1");
    CHECK(r.exit_code == 0);
    CHECK(contains(r.out, "fiber_objects: 3"));
    CHECK(contains(r.out, "product_objects: 3"));
    CHECK(contains(r.out, "isomorphism: yes"));
}

TEST_CASE("rep-verify passes on the arrow quiver, rejects the cycle") {
    auto r = run("rep-verify " + fx("a2.qv") + " --backend pset:2");
    CHECK(r.exit_code == 0);
    CHECK(contains(r.out, "overall: pass"));
    CHECK(contains(r.out, "stages_ok: yes"));
    auto c = run("rep-verify " + fx("cycle3.qv") + " --backend pset:2");
    CHECK(c.exit_code == 65);
    CHECK(contains(c.out, "not left rooted"));
}

TEST_CASE("canonical fixtures round-trip byte-identically") {
    for (const char* f : {"pset2.cat", "broken-c1.cat", "chain3.qv",
                          "cycle3.qv", "empty.qv", "a2.qv", "fork.qv",
                          "a2-vect.rm", "a2-vect-id.rm",
                          "a2-vect-nonnatural.rm", "corrupted-cleavage.opf"}) {
        const std::string text = slurp(fx(f));
        CHECK(emit(parse_document(text)) == text);
    }
}

TEST_CASE("parse rejects malformed documents with positions") {
    CHECK_THROWS_AS(parse_document("no header\n"), DocError);
    try {
        parse_document("kind: quiver\nVERTICES\n1 2\nARROWS\n0 | 1 5\nEND\n");
        FAIL("expected DocError");
    } catch (const DocError& e) {
        CHECK(e.line() == 5);
    }
    CHECK_THROWS_AS(parse_document("kind: nonsense\nEND\n"), DocError);
}
