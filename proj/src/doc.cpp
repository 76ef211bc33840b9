#include "wald/doc.hpp"

#include <charconv>
#include <sstream>

namespace wald {

namespace {

struct Lines {
    std::vector<std::string_view> v;
    std::size_t pos = 0;

    explicit Lines(std::string_view text) {
        std::size_t start = 0;
        while (start <= text.size()) {
            std::size_t nl = text.find('\n', start);
            if (nl == std::string_view::npos) {
                if (start < text.size()) v.push_back(text.substr(start));
                break;
            }
            v.push_back(text.substr(start, nl - start));
            start = nl + 1;
        }
    }
    bool done() const { return pos >= v.size(); }
    int lineno() const { return static_cast<int>(pos) + 1; }
    std::string_view peek() const { return v[pos]; }
    std::string_view take() { return v[pos++]; }
};

[[noreturn]] void fail(const Lines& in, const std::string& what) {
    throw DocError(in.lineno(), what);
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

/// `key: value` header line; returns false if the line is not a header.
bool header(std::string_view line, std::string_view& key,
            std::string_view& value) {
    std::size_t c = line.find(": ");
    if (c == std::string_view::npos || c == 0) return false;
    key = line.substr(0, c);
    value = trim(line.substr(c + 2));
    return !key.empty() && key.find(' ') == std::string_view::npos;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        std::size_t bar = line.find(" | ", start);
        if (bar == std::string_view::npos) {
            out.push_back(trim(line.substr(start)));
            return out;
        }
        out.push_back(trim(line.substr(start, bar - start)));
        start = bar + 3;
    }
}

std::vector<long long> ints(const Lines& in, std::string_view field) {
    std::vector<long long> out;
    std::size_t pos = 0;
    while (pos < field.size()) {
        while (pos < field.size() && field[pos] == ' ') ++pos;
        if (pos >= field.size()) break;
        std::size_t end = pos;
        while (end < field.size() && field[end] != ' ') ++end;
        long long x = 0;
        auto [p, ec] =
            std::from_chars(field.data() + pos, field.data() + end, x);
        if (ec != std::errc{} || p != field.data() + end)
            fail(in, "expected an integer, got '" +
                         std::string(field.substr(pos, end - pos)) + "'");
        out.push_back(x);
        pos = end;
    }
    return out;
}

long long one_int(const Lines& in, std::string_view field) {
    auto xs = ints(in, field);
    if (xs.size() != 1) fail(in, "expected a single integer");
    return xs[0];
}

bool section_start(std::string_view line) {
    if (line.empty()) return false;
    for (char c : line)
        if (!(c == '_' || c == '-' || (c >= 'A' && c <= 'Z'))) return false;
    return true;
}

CategoryDoc parse_category(Lines& in, std::string name) {
    CategoryDoc d;
    d.name = std::move(name);
    FinCategory::Builder bld;
    struct MorRow {
        ObjId src, tgt;
        std::string label;
    };
    std::vector<MorRow> mors;
    std::vector<std::array<MorId, 3>> compose;
    ObjId initial = kNoObj;
    std::vector<MorId> cof, we;
    int nobj = 0;
    bool saw_objects = false, saw_morphisms = false, saw_classes = false;

    while (!in.done()) {
        std::string_view line = trim(in.peek());
        if (line == "END") {
            in.take();
            break;
        }
        if (!section_start(line)) fail(in, "expected a section heading");
        std::string section(trim(in.take()));
        while (!in.done() && trim(in.peek()) != "END" &&
               !section_start(trim(in.peek()))) {
            std::string_view row = trim(in.peek());
            if (row.empty()) {
                in.take();
                continue;
            }
            auto f = split_fields(row);
            if (section == "OBJECTS") {
                saw_objects = true;
                if (f.size() > 2) fail(in, "OBJECTS row: `id | label`");
                if (one_int(in, f[0]) != nobj)
                    fail(in, "object ids must be consecutive from 0");
                bld.add_object(f.size() > 1 ? std::string(f[1]) : "");
                ++nobj;
            } else if (section == "MORPHISMS") {
                saw_morphisms = true;
                if (f.size() < 2 || f.size() > 3)
                    fail(in, "MORPHISMS row: `id | src tgt | label`");
                if (one_int(in, f[0]) != static_cast<int>(mors.size()))
                    fail(in, "morphism ids must be consecutive from 0");
                auto st = ints(in, f[1]);
                if (st.size() != 2) fail(in, "expected `src tgt`");
                if (st[0] < 0 || st[0] >= nobj || st[1] < 0 || st[1] >= nobj)
                    fail(in, "morphism endpoint out of range");
                mors.push_back({static_cast<ObjId>(st[0]),
                                static_cast<ObjId>(st[1]),
                                f.size() > 2 ? std::string(f[2]) : ""});
            } else if (section == "COMPOSE") {
                auto xs = ints(in, f[0]);
                if (f.size() != 1 || xs.size() != 3)
                    fail(in, "COMPOSE row: `g f gf`");
                for (long long x : xs)
                    if (x < 0 || x >= static_cast<long long>(mors.size()))
                        fail(in, "COMPOSE morphism id out of range");
                compose.push_back({static_cast<MorId>(xs[0]),
                                   static_cast<MorId>(xs[1]),
                                   static_cast<MorId>(xs[2])});
            } else if (section == "CLASSES") {
                saw_classes = true;
                std::size_t sp = f[0].find(' ');
                std::string_view tag = f[0].substr(0, sp);
                std::string_view rest =
                    sp == std::string_view::npos ? "" : f[0].substr(sp + 1);
                auto xs = ints(in, rest);
                if (tag == "initial") {
                    if (xs.size() != 1 || xs[0] < 0 || xs[0] >= nobj)
                        fail(in, "CLASSES initial: one object id");
                    initial = static_cast<ObjId>(xs[0]);
                } else if (tag == "cof" || tag == "we") {
                    for (long long x : xs) {
                        if (x < 0 || x >= static_cast<long long>(mors.size()))
                            fail(in, "class member out of range");
                        (tag == "cof" ? cof : we)
                            .push_back(static_cast<MorId>(x));
                    }
                } else {
                    fail(in, "unknown CLASSES tag '" + std::string(tag) + "'");
                }
            } else {
                fail(in, "unknown section '" + section + "'");
            }
            in.take();
        }
    }
    if (!saw_objects || !saw_morphisms || !saw_classes)
        fail(in, "category needs OBJECTS, MORPHISMS and CLASSES sections");

    for (const MorRow& m : mors) bld.add_morphism(m.src, m.tgt, m.label);
    // identities are recovered from the composition table: id_a is the
    // morphism at a that composes to the other factor on both sides
    std::vector<char> left_neutral(mors.size(), 1), right_neutral(mors.size(), 1);
    for (const auto& [g, f, gf] : compose) {
        if (gf != f) left_neutral[g] = 0;
        if (gf != g) right_neutral[f] = 0;
        bld.set_compose(g, f, gf);
    }
    for (ObjId a = 0; a < nobj; ++a)
        for (MorId m = 0; m < static_cast<MorId>(mors.size()); ++m)
            if (mors[m].src == a && mors[m].tgt == a && left_neutral[m] &&
                right_neutral[m]) {
                bld.set_identity(a, m);
                break;
            }
    d.S = WaldhausenStructure(std::move(bld).build());
    d.S.initial = initial;
    for (MorId m : cof) d.S.cof.insert(m);
    for (MorId m : we) d.S.we.insert(m);
    return d;
}

QuiverDoc parse_quiver(Lines& in, std::string name) {
    QuiverDoc d;
    d.name = std::move(name);
    while (!in.done()) {
        std::string_view line = trim(in.peek());
        if (line == "END") {
            in.take();
            break;
        }
        if (!section_start(line)) fail(in, "expected a section heading");
        std::string section(trim(in.take()));
        while (!in.done() && trim(in.peek()) != "END" &&
               !section_start(trim(in.peek()))) {
            std::string_view row = trim(in.peek());
            if (row.empty()) {
                in.take();
                continue;
            }
            auto f = split_fields(row);
            if (section == "VERTICES") {
                for (long long v : ints(in, f[0]))
                    d.q.vertices.push_back(static_cast<int>(v));
            } else if (section == "ARROWS") {
                if (f.size() != 2) fail(in, "ARROWS row: `id | src tgt`");
                auto st = ints(in, f[1]);
                if (st.size() != 2) fail(in, "expected `src tgt`");
                d.q.arrows.push_back({static_cast<int>(one_int(in, f[0])),
                                      static_cast<int>(st[0]),
                                      static_cast<int>(st[1])});
                if (!d.q.has_vertex(d.q.arrows.back().src) ||
                    !d.q.has_vertex(d.q.arrows.back().tgt))
                    fail(in, "arrow endpoint is not a vertex");
            } else {
                fail(in, "unknown section '" + section + "'");
            }
            in.take();
        }
    }
    return d;
}

RepMorphismDoc parse_rep_morphism(Lines& in, std::string backend,
                                  std::string quiver) {
    RepMorphismDoc d;
    d.backend = std::move(backend);
    d.quiver = std::move(quiver);
    while (!in.done()) {
        std::string_view line = trim(in.peek());
        if (line == "END") {
            in.take();
            break;
        }
        if (!section_start(line)) fail(in, "expected a section heading");
        std::string section(trim(in.take()));
        while (!in.done() && trim(in.peek()) != "END" &&
               !section_start(trim(in.peek()))) {
            std::string_view row = trim(in.peek());
            if (row.empty()) {
                in.take();
                continue;
            }
            auto f = split_fields(row);
            if (section == "ON_VERTICES") {
                if (f.size() != 2) fail(in, "ON_VERTICES row: `v | X_v Y_v`");
                auto xy = ints(in, f[1]);
                if (xy.size() != 2) fail(in, "expected `X_v Y_v`");
                d.on_vertices[static_cast<int>(one_int(in, f[0]))] = {
                    static_cast<int>(xy[0]), static_cast<int>(xy[1])};
            } else if (section == "ON_ARROWS") {
                if (f.size() != 3)
                    fail(in, "ON_ARROWS row: `a | X_a | Y_a`");
                d.on_arrows[static_cast<int>(one_int(in, f[0]))] = {
                    std::string(f[1]), std::string(f[2])};
            } else if (section == "COMPONENTS") {
                if (f.size() != 2) fail(in, "COMPONENTS row: `v | f_v`");
                d.components[static_cast<int>(one_int(in, f[0]))] =
                    std::string(f[1]);
            } else {
                fail(in, "unknown section '" + section + "'");
            }
            in.take();
        }
    }
    return d;
}

OpfibrationDoc parse_opfibration(Lines& in, std::string builtin,
                                 std::string backend) {
    OpfibrationDoc d;
    d.builtin = std::move(builtin);
    d.backend = std::move(backend);
    if (d.builtin != "codomain" && d.builtin != "domain")
        fail(in, "builtin must be 'codomain' or 'domain'");
    while (!in.done()) {
        std::string_view line = trim(in.peek());
        if (line == "END") {
            in.take();
            break;
        }
        if (!section_start(line)) fail(in, "expected a section heading");
        std::string section(trim(in.take()));
        while (!in.done() && trim(in.peek()) != "END" &&
               !section_start(trim(in.peek()))) {
            std::string_view row = trim(in.peek());
            if (row.empty()) {
                in.take();
                continue;
            }
            if (section == "CLEAVAGE") {
                auto xs = ints(in, row);
                if (xs.size() != 4)
                    fail(in, "CLEAVAGE row: `u X lifted lambda`");
                d.cleavage.push_back({static_cast<int>(xs[0]),
                                      static_cast<int>(xs[1]),
                                      static_cast<int>(xs[2]),
                                      static_cast<int>(xs[3])});
            } else {
                fail(in, "unknown section '" + section + "'");
            }
            in.take();
        }
    }
    return d;
}

MorphismClassDoc parse_morphism_class(Lines& in, std::string name) {
    MorphismClassDoc d;
    d.name = std::move(name);
    while (!in.done()) {
        std::string_view line = trim(in.peek());
        if (line == "END") {
            in.take();
            break;
        }
        if (!section_start(line)) fail(in, "expected a section heading");
        std::string section(trim(in.take()));
        while (!in.done() && trim(in.peek()) != "END" &&
               !section_start(trim(in.peek()))) {
            std::string_view row = trim(in.peek());
            if (row.empty()) {
                in.take();
                continue;
            }
            if (section == "MEMBERS") {
                for (long long x : ints(in, row))
                    d.members.push_back(static_cast<MorId>(x));
            } else {
                fail(in, "unknown section '" + section + "'");
            }
            in.take();
        }
    }
    return d;
}

}  // namespace

Document parse_document(std::string_view text) {
    Lines in(text);
    std::map<std::string, std::string> hdr;
    while (!in.done()) {
        std::string_view key, value;
        std::string_view line = trim(in.peek());
        if (line.empty()) {
            in.take();
            continue;
        }
        if (!header(line, key, value)) break;
        hdr[std::string(key)] = std::string(value);
        in.take();
    }
    auto it = hdr.find("kind");
    if (it == hdr.end()) fail(in, "missing 'kind:' header");
    const std::string& kind = it->second;
    if (kind == "category") return parse_category(in, hdr["name"]);
    if (kind == "quiver") return parse_quiver(in, hdr["name"]);
    if (kind == "representation")
        return parse_rep_morphism(in, hdr["backend"], hdr["quiver"]);
    if (kind == "opfibration")
        return parse_opfibration(in, hdr["builtin"], hdr["backend"]);
    if (kind == "morphism-class") return parse_morphism_class(in, hdr["name"]);
    throw DocError(1, "unknown kind '" + kind + "'");
}

namespace {

void emit_header(std::ostringstream& out, std::string_view kind,
                 std::initializer_list<std::pair<const char*, std::string_view>>
                     fields) {
    out << "kind: " << kind << "\n";
    for (auto [k, v] : fields)
        if (!v.empty()) out << k << ": " << v << "\n";
}

}  // namespace

std::string emit_category(const CategoryDoc& d) {
    std::ostringstream out;
    emit_header(out, "category", {{"name", d.name}});
    const FinCategory& c = *d.S.cat;
    out << "OBJECTS\n";
    for (ObjId a = 0; a < c.object_count(); ++a) {
        out << a;
        if (!c.object_label(a).empty()) out << " | " << c.object_label(a);
        out << "\n";
    }
    out << "MORPHISMS\n";
    for (MorId m = 0; m < c.morphism_count(); ++m) {
        out << m << " | " << c.source(m) << ' ' << c.target(m);
        if (!c.morphism_label(m).empty()) out << " | " << c.morphism_label(m);
        out << "\n";
    }
    out << "COMPOSE\n";
    for (MorId g = 0; g < c.morphism_count(); ++g)
        for (MorId f = 0; f < c.morphism_count(); ++f)
            if (c.composable(g, f))
                out << g << ' ' << f << ' ' << c.compose(g, f) << "\n";
    out << "CLASSES\n";
    out << "initial " << d.S.initial << "\n";
    out << "cof";
    for (MorId m : d.S.cof.members()) out << ' ' << m;
    out << "\nwe";
    for (MorId m : d.S.we.members()) out << ' ' << m;
    out << "\nEND\n";
    return std::move(out).str();
}

std::string emit_quiver(const QuiverDoc& d) {
    std::ostringstream out;
    emit_header(out, "quiver", {{"name", d.name}});
    out << "VERTICES\n";
    for (std::size_t i = 0; i < d.q.vertices.size(); ++i)
        out << (i ? " " : "") << d.q.vertices[i];
    out << "\nARROWS\n";
    for (const Arrow& a : d.q.arrows)
        out << a.id << " | " << a.src << ' ' << a.tgt << "\n";
    out << "END\n";
    return std::move(out).str();
}

std::string emit_rep_morphism(const RepMorphismDoc& d) {
    std::ostringstream out;
    emit_header(out, "representation",
                {{"backend", d.backend}, {"quiver", d.quiver}});
    out << "ON_VERTICES\n";
    for (const auto& [v, xy] : d.on_vertices)
        out << v << " | " << xy.first << ' ' << xy.second << "\n";
    out << "ON_ARROWS\n";
    for (const auto& [a, xy] : d.on_arrows)
        out << a << " | " << xy.first << " | " << xy.second << "\n";
    out << "COMPONENTS\n";
    for (const auto& [v, f] : d.components) out << v << " | " << f << "\n";
    out << "END\n";
    return std::move(out).str();
}

std::string emit_opfibration(const OpfibrationDoc& d) {
    std::ostringstream out;
    emit_header(out, "opfibration",
                {{"builtin", d.builtin}, {"backend", d.backend}});
    out << "CLEAVAGE\n";
    for (const auto& row : d.cleavage)
        out << row[0] << ' ' << row[1] << ' ' << row[2] << ' ' << row[3]
            << "\n";
    out << "END\n";
    return std::move(out).str();
}

std::string emit_morphism_class(const MorphismClassDoc& d) {
    std::ostringstream out;
    emit_header(out, "morphism-class", {{"name", d.name}});
    out << "MEMBERS\n";
    for (std::size_t i = 0; i < d.members.size(); ++i)
        out << (i ? " " : "") << d.members[i];
    out << "\nEND\n";
    return std::move(out).str();
}

std::string emit(const Document& d) {
    return std::visit(
        [](const auto& x) -> std::string {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, CategoryDoc>)
                return emit_category(x);
            else if constexpr (std::is_same_v<T, QuiverDoc>)
                return emit_quiver(x);
            else if constexpr (std::is_same_v<T, RepMorphismDoc>)
                return emit_rep_morphism(x);
            else if constexpr (std::is_same_v<T, OpfibrationDoc>)
                return emit_opfibration(x);
            else
                return emit_morphism_class(x);
        },
        d);
}

}  // namespace wald
