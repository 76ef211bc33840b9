#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wald/doc.hpp"
#include "wald/opfib.hpp"
#include "wald/repcat.hpp"

using namespace wald;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitInconclusive = 2;
constexpr int kExitParse = 64;
constexpr int kExitData = 65;

[[noreturn]] void die(int code, const std::string& msg) {
    std::cerr << "error: " << msg << "\n";
    std::exit(code);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) die(kExitParse, path + ": cannot open");
    std::ostringstream ss;
    ss << in.rdbuf();
    return std::move(ss).str();
}

Document load(const std::string& path) {
    try {
        return parse_document(read_file(path));
    } catch (const DocError& e) {
        die(kExitParse, path + ": " + e.what());
    }
}

template <typename T>
T load_as(const std::string& path, const char* kind) {
    Document d = load(path);
    if (auto* p = std::get_if<T>(&d)) return std::move(*p);
    die(kExitParse, path + ": expected a " + std::string(kind) + " document");
}

long long default_budget() {
    if (const char* env = std::getenv("WALDCHECK_BUDGET"))
        return std::atoll(env);
    return 4'000'000'000LL;
}

const char* status_str(CheckStatus s) {
    switch (s) {
        case CheckStatus::pass: return "pass";
        case CheckStatus::fail: return "fail";
        default: return "inconclusive";
    }
}

void print_axioms(const AxiomReport& r, bool records) {
    for (const AxiomCheck& c : r.checks) {
        if (records) {
            std::cout << "axiom=" << c.axiom << " status="
                      << status_str(c.status) << " instances=" << c.instances
                      << " skipped=" << c.skipped_at_boundary << "\n";
        } else {
            std::cout << c.axiom << ": " << status_str(c.status)
                      << " (instances=" << c.instances
                      << ", skipped=" << c.skipped_at_boundary << ")\n";
        }
        for (const Witness& w : c.witnesses) {
            std::cout << (records ? "witness=" : "  witness: ") << w.what
                      << " mors=[";
            for (std::size_t i = 0; i < w.mors.size(); ++i)
                std::cout << (i ? " " : "") << w.mors[i];
            std::cout << "]\n";
        }
    }
    std::cout << (records ? "overall=" : "overall: ")
              << status_str(r.overall()) << "\n";
}

int exit_of(CheckStatus s) {
    switch (s) {
        case CheckStatus::pass: return kExitPass;
        case CheckStatus::fail: return kExitFail;
        default: return kExitInconclusive;
    }
}

BackendCategory backend_category(const std::string& spec) {
    std::string err;
    auto be = make_backend(spec, &err);
    if (!be) die(kExitData, "backend '" + spec + "': " + err);
    if (spec.rfind("pset:", 0) == 0) return pset_category(be->bound());
    auto* v = dynamic_cast<const VectBackend*>(be.get());
    return vect_category(v->prime(), v->bound());
}

std::string yesno(bool b) { return b ? "yes" : "no"; }

// ---- verify-waldhausen ----------------------------------------------------

int cmd_verify(const std::string& path, long long budget, bool records) {
    auto doc = load_as<CategoryDoc>(path, "category");
    auto vr = validate_category(*doc.S.cat);
    if (!vr.ok())
        die(kExitData, path + ": not a category: " + vr.issues[0].what);
    AxiomReport r = verify_waldhausen(doc.S, budget);
    print_axioms(r, records);
    return exit_of(r.overall());
}

// ---- check-wfs ------------------------------------------------------------

int cmd_check_wfs(const std::string& path, const std::string& right_path,
                  bool records) {
    auto doc = load_as<CategoryDoc>(path, "category");
    MorphismClass F;
    if (right_path.empty()) {
        F = rlp_class(doc.S.cof);
    } else {
        auto mc = load_as<MorphismClassDoc>(right_path, "morphism-class");
        F = MorphismClass(doc.S.cat);
        for (MorId m : mc.members) {
            if (!doc.S.cat->valid_morphism(m))
                die(kExitData, right_path + ": member out of range");
            F.insert(m);
        }
    }
    WfsReport r = is_wfs(doc.S.cof, F);
    const char* sep = records ? "=" : ": ";
    std::cout << "rlp_matches" << sep << yesno(r.rlp_matches) << "\n";
    std::cout << "llp_matches" << sep << yesno(r.llp_matches) << "\n";
    std::cout << "factored" << sep << r.factored << "\n";
    std::cout << "unfactored_at_bound" << sep << r.unfactored_at_bound.size()
              << "\n";
    std::cout << "wfs" << sep << yesno(r.ok()) << "\n";
    return r.ok() ? kExitPass : kExitFail;
}

// ---- quiver ---------------------------------------------------------------

int cmd_quiver(const std::string& action, const std::string& path, int stage) {
    auto doc = load_as<QuiverDoc>(path, "quiver");
    auto rs = rooted_sequence(doc.q);
    if (action == "rooted-seq") {
        for (std::size_t mu = 0; mu < rs.stages.size(); ++mu) {
            std::cout << "V_" << mu << ":";
            for (int v : rs.stages[mu]) std::cout << ' ' << v;
            std::cout << "\n";
        }
        std::cout << "zeta: " << rs.zeta << "\n";
        std::cout << "complete: " << yesno(rs.complete) << "\n";
        return kExitPass;
    }
    if (action == "is-left-rooted") {
        std::cout << (is_left_rooted(doc.q) ? "true" : "false") << "\n";
        return kExitPass;
    }
    if (action == "subquiver") {
        try {
            QuiverDoc out{doc.name + "-stage" + std::to_string(stage),
                          subquiver(doc.q, rs, stage)};
            std::cout << emit_quiver(out);
        } catch (const std::out_of_range& e) {
            die(kExitData, e.what());
        }
        return kExitPass;
    }
    die(kExitData, "unknown quiver action '" + action + "'");
}

// ---- rep-classify ---------------------------------------------------------

int cmd_rep_classify(const std::string& quiver_path, const std::string& path,
                     std::string backend_spec) {
    auto qdoc = load_as<QuiverDoc>(quiver_path, "quiver");
    auto rm = load_as<RepMorphismDoc>(path, "representation");
    if (backend_spec.empty()) backend_spec = rm.backend;
    std::string err;
    auto be = make_backend(backend_spec, &err);
    if (!be) die(kExitData, "backend '" + backend_spec + "': " + err);

    const Quiver& q = qdoc.q;
    Representation X{q, {}, {}}, Y{q, {}, {}};
    RepMorphism f;
    for (int v : q.vertices) {
        auto it = rm.on_vertices.find(v);
        if (it == rm.on_vertices.end())
            die(kExitData, path + ": missing vertex " + std::to_string(v));
        X.on_v.push_back(it->second.first);
        Y.on_v.push_back(it->second.second);
    }
    auto decode = [&](int src, int tgt, const std::string& text,
                      const std::string& where) {
        std::string derr;
        auto m = be->decode(src, tgt, text, &derr);
        if (!m) die(kExitParse, path + ": " + where + ": " + derr);
        return *m;
    };
    for (const Arrow& a : q.arrows) {
        auto it = rm.on_arrows.find(a.id);
        if (it == rm.on_arrows.end())
            die(kExitData, path + ": missing arrow " + std::to_string(a.id));
        const int xs = X.on_v[q.index_of(a.src)];
        const int xt = X.on_v[q.index_of(a.tgt)];
        const int ys = Y.on_v[q.index_of(a.src)];
        const int yt = Y.on_v[q.index_of(a.tgt)];
        X.on_a.push_back(decode(xs, xt, it->second.first,
                                "arrow " + std::to_string(a.id) + " source"));
        Y.on_a.push_back(decode(ys, yt, it->second.second,
                                "arrow " + std::to_string(a.id) + " target"));
        if (!be->is_cof(X.on_a.back()) || !be->is_cof(Y.on_a.back()))
            die(kExitData, "arrow " + std::to_string(a.id) +
                               ": arrow map is not a cofibration");
    }
    for (int v : q.vertices) {
        auto it = rm.components.find(v);
        if (it == rm.components.end())
            die(kExitData, path + ": missing component at vertex " +
                               std::to_string(v));
        f.components.push_back(
            decode(X.on_v[q.index_of(v)], Y.on_v[q.index_of(v)], it->second,
                   "component at vertex " + std::to_string(v)));
    }
    for (std::size_t k = 0; k < q.arrows.size(); ++k) {
        const Arrow& a = q.arrows[k];
        const int s = q.index_of(a.src), t = q.index_of(a.tgt);
        if (be->compose(f.components[t], X.on_a[k]) !=
            be->compose(Y.on_a[k], f.components[s]))
            die(kExitData,
                "naturality fails at arrow " + std::to_string(a.id));
    }
    for (int v : q.vertices) {
        RhoData r = rho(*be, X, Y, f, v);
        std::cout << "vertex " << v << ": rho = " << be->encode(r.rho)
                  << " (apex " << r.po.apex << ", cof "
                  << yesno(be->is_cof(r.rho)) << ", we "
                  << yesno(be->is_we(r.rho)) << ")\n";
    }
    Classification c = classify(*be, X, Y, f);
    std::cout << "cofibration: " << yesno(c.is_cof) << "\n";
    std::cout << "weak-equivalence: " << yesno(c.is_we) << "\n";
    return kExitPass;
}

// ---- rep-verify -----------------------------------------------------------

int cmd_rep_verify(const std::string& path, const std::string& backend_spec,
                   int bound, int stage_bound, bool records) {
    auto qdoc = load_as<QuiverDoc>(path, "quiver");
    std::string err;
    auto be = make_backend(backend_spec, &err);
    if (!be) die(kExitData, "backend '" + backend_spec + "': " + err);
    if (!is_left_rooted(qdoc.q))
        die(kExitData, path + ": quiver is not left rooted");
    if (bound < 0) bound = be->bound();
    if (stage_bound < 0) stage_bound = bound;
    RepWaldhausenReport r = rep_waldhausen(be, qdoc.q, bound, stage_bound);
    const char* sep = records ? "=" : ": ";
    std::cout << "objects" << sep << r.cat.S.cat->object_count() << "\n";
    std::cout << "morphisms" << sep << r.cat.S.cat->morphism_count() << "\n";
    print_axioms(r.axioms, records);
    std::cout << "stages_ok" << sep << yesno(r.stages_ok) << "\n";
    std::cout << "stage_instances" << sep << r.stage_instances << "\n";
    std::cout << "stage_skipped" << sep << r.stage_skipped << "\n";
    for (const std::string& p : r.problems)
        std::cout << (records ? "problem=" : "problem: ") << p << "\n";
    if (r.axioms.overall() == CheckStatus::fail || !r.stages_ok)
        return kExitFail;
    return exit_of(r.axioms.overall());
}

// ---- total ----------------------------------------------------------------

struct BuiltTotal {
    BackendCategory base;
    OpfibrationData op;
    std::vector<FiberStructure> fibers;
    WaldhausenStructure reference;  // the classical structure to compare with
};

BuiltTotal build_total(const std::string& builtin,
                       const std::string& backend_spec) {
    BuiltTotal t;
    t.base = backend_category(backend_spec);
    if (builtin == "codomain") {
        auto co = codomain_opfib(t.base.S);
        t.op = std::move(co.op);
        t.fibers = fibers_from_total(t.op.p, co.m.S);
        auto sq = co.m.square_of;
        attach_span_guards(t.fibers, t.base.S.cat,
                           [sq](MorId m) { return sq[m].top; });
        t.reference = std::move(co.m.S);
    } else if (builtin == "domain") {
        auto dm = domain_opfib(t.base.S);
        t.op = std::move(dm.op);
        t.fibers = fibers_from_total(t.op.p, dm.cm.m.S);
        auto sq = dm.cm.m.square_of;
        attach_span_guards(t.fibers, t.base.S.cat,
                           [sq](MorId m) { return sq[m].bot; });
        t.reference = std::move(dm.cm.m.S);
    } else {
        die(kExitData, "unknown builtin '" + builtin +
                           "' (expected codomain or domain)");
    }
    return t;
}

int cmd_total(const std::string& target, const std::string& backend_spec,
              long long budget, bool records) {
    BuiltTotal t;
    if (target == "codomain" || target == "domain") {
        t = build_total(target, backend_spec);
    } else {
        auto doc = load_as<OpfibrationDoc>(target, "opfibration");
        t = build_total(doc.builtin,
                        doc.backend.empty() ? backend_spec : doc.backend);
        const FinCategory& T = *t.op.p.src;
        const FinCategory& B = *t.op.p.dst;
        for (const auto& row : doc.cleavage) {
            if (!B.valid_morphism(row[0]) || !T.valid_object(row[1]) ||
                !T.valid_object(row[2]) || !T.valid_morphism(row[3]))
                die(kExitData, target + ": cleavage override out of range");
            t.op.cleavage[{row[0], row[1]}] = CleavageEntry{row[2], row[3]};
        }
    }
    const char* sep = records ? "=" : ": ";
    auto check = check_waldhausen_opfib(t.op, t.fibers);
    std::cout << "opfibration_check" << sep << yesno(check.ok) << "\n";
    for (const std::string& p : check.problems)
        std::cout << (records ? "problem=" : "problem: ") << p << "\n";
    if (!check.ok) return kExitFail;

    WaldhausenStructure total = total_structure(t.op, t.base.S, t.fibers);
    if (records) {
        for (MorId m = 0; m < total.cat->morphism_count(); ++m)
            std::cout << "mor=" << m << " cof="
                      << (total.cof_known(m)
                              ? yesno(total.cof.contains(m))
                              : "unknown")
                      << " we="
                      << (total.we_known(m) ? yesno(total.we.contains(m))
                                            : "unknown")
                      << "\n";
    } else {
        int cof_unknown = 0, we_unknown = 0;
        for (MorId m = 0; m < total.cat->morphism_count(); ++m) {
            cof_unknown += !total.cof_known(m);
            we_unknown += !total.we_known(m);
        }
        std::cout << "morphisms: " << total.cat->morphism_count()
                  << ", cof: " << total.cof.size() << " (+" << cof_unknown
                  << " unknown), we: " << total.we.size() << " (+"
                  << we_unknown << " unknown)\n";
    }
    const bool identical = total.cof.same_members(t.reference.cof) &&
                           total.we.same_members(t.reference.we) &&
                           total.cof_unknown == t.reference.cof_unknown &&
                           total.we_unknown == t.reference.we_unknown &&
                           total.initial == t.reference.initial;
    std::cout << "identical" << sep << yesno(identical) << "\n";
    AxiomReport r = verify_waldhausen(total, budget);
    print_axioms(r, records);
    if (!identical) return kExitFail;
    return exit_of(r.overall());
}

// ---- fiber-iso ------------------------------------------------------------

int cmd_fiber_iso(const std::string& path, const std::string& backend_spec,
                  int stage, int object, int bound, bool records) {
    auto qdoc = load_as<QuiverDoc>(path, "quiver");
    std::string err;
    auto be = make_backend(backend_spec, &err);
    if (!be) die(kExitData, "backend '" + backend_spec + "': " + err);
    if (!is_left_rooted(qdoc.q))
        die(kExitData, path + ": quiver is not left rooted");
    auto rs = rooted_sequence(qdoc.q);
    if (stage < 0 || stage >= rs.zeta)
        die(kExitData, "stage out of range (0.." + std::to_string(rs.zeta - 1) +
                           ")");
    if (bound < 0) bound = be->bound();
    auto ro = restriction_opfib(be, qdoc.q, rs, stage, bound);
    if (object < 0 || object >= ro.lower.S.cat->object_count())
        die(kExitData, "object out of range (lower category has " +
                           std::to_string(ro.lower.S.cat->object_count()) +
                           " objects)");
    auto ambient = backend_category(backend_spec);
    auto fi = fiber_iso(ro, object, ambient);
    const char* sep = records ? "=" : ": ";
    std::cout << "fiber_objects" << sep << fi.fib.cat->object_count() << "\n";
    std::cout << "fiber_morphisms" << sep << fi.fib.cat->morphism_count()
              << "\n";
    std::cout << "product_objects" << sep << fi.prod.S.cat->object_count()
              << "\n";
    std::cout << "product_morphisms" << sep << fi.prod.S.cat->morphism_count()
              << "\n";
    std::cout << "skipped" << sep << fi.skipped_at_boundary << "\n";
    std::cout << "isomorphism" << sep << yesno(fi.ok) << "\n";
    for (const std::string& p : fi.problems)
        std::cout << (records ? "problem=" : "problem: ") << p << "\n";
    return fi.ok ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite-instance checker for Waldhausen structures"};
    app.require_subcommand(1);

    std::string format = "text";
    app.add_option("--format", format, "text | records")
        ->check(CLI::IsMember({"text", "records"}));
    long long budget = default_budget();
    app.add_option("--budget", budget, "axiom sweep budget");

    std::string file, right, quiver_file, backend = "pset:2", action;
    std::string doc_backend;  // empty = take the backend from the document
    int stage = 0, object = 0, bound = -1, stage_bound = -1;

    auto* verify = app.add_subcommand("verify-waldhausen",
                                      "check the axioms of a category doc");
    verify->add_option("file", file)->required();

    auto* wfs = app.add_subcommand("check-wfs",
                                   "check the weak factorization system");
    wfs->add_option("file", file)->required();
    wfs->add_option("--right", right, "morphism-class doc with F");

    auto* qv = app.add_subcommand("quiver", "rooted-stage computations");
    qv->add_option("action", action, "rooted-seq | is-left-rooted | subquiver")
        ->required();
    qv->add_option("file", file)->required();
    qv->add_option("--stage", stage);

    auto* rc = app.add_subcommand("rep-classify",
                                  "classify a morphism of representations");
    rc->add_option("file", file, "representation morphism doc")->required();
    rc->add_option("--quiver", quiver_file)->required();
    rc->add_option("--backend", doc_backend);

    auto* rv = app.add_subcommand("rep-verify",
                                  "verify the representation category");
    rv->add_option("file", file, "quiver doc")->required();
    rv->add_option("--backend", backend);
    rv->add_option("--bound", bound);
    rv->add_option("--stage-bound", stage_bound);

    auto* tot = app.add_subcommand("total",
                                   "total structure of an opfibration");
    tot->add_option("target", file, "codomain | domain | opfibration doc")
        ->required();
    tot->add_option("--backend", backend);

    auto* fib = app.add_subcommand("fiber-iso",
                                   "fiber vs product-of-coslices comparison");
    fib->add_option("file", file, "quiver doc")->required();
    fib->add_option("--backend", backend);
    fib->add_option("--stage", stage);
    fib->add_option("--object", object);
    fib->add_option("--bound", bound);

    CLI11_PARSE(app, argc, argv);
    const bool records = format == "records";

    try {
        if (verify->parsed()) return cmd_verify(file, budget, records);
        if (wfs->parsed()) return cmd_check_wfs(file, right, records);
        if (qv->parsed()) return cmd_quiver(action, file, stage);
        if (rc->parsed())
            return cmd_rep_classify(quiver_file, file, doc_backend);
        if (rv->parsed())
            return cmd_rep_verify(file, backend, bound, stage_bound, records);
        if (tot->parsed()) return cmd_total(file, backend, budget, records);
        if (fib->parsed())
            return cmd_fiber_iso(file, backend, stage, object, bound, records);
    } catch (const std::exception& e) {
        die(kExitData, e.what());
    }
    return kExitPass;
}
