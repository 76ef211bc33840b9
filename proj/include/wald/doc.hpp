#pragma once

#include <array>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "wald/quiver.hpp"
#include "wald/waldhausen.hpp"

namespace wald {

/// Positioned parse failure; `line` is 1-based.
class DocError : public std::runtime_error {
public:
    DocError(int line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what),
          line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

/// kind: category.  Sections OBJECTS (`id | label`), MORPHISMS
/// (`id | src tgt | label`), COMPOSE (`g f gf`), CLASSES (`initial`,
/// `cof`, `we` lines).
struct CategoryDoc {
    std::string name;
    WaldhausenStructure S;
};

/// kind: quiver.  Sections VERTICES (one line of labels) and ARROWS
/// (`id | src tgt`).
struct QuiverDoc {
    std::string name;
    Quiver q;
};

/// kind: representation.  A morphism of representations: two object tuples,
/// both arrow maps and the components, with backend morphisms kept as
/// encoded strings (decoded by the caller once a backend is chosen).
struct RepMorphismDoc {
    std::string backend;  // "pset:N" or "vect:P:D"
    std::string quiver;   // name of the quiver it lives on (informative)
    std::map<int, std::pair<int, int>> on_vertices;  // vertex -> (X_i, Y_i)
    std::map<int, std::pair<std::string, std::string>> on_arrows;
    std::map<int, std::string> components;  // vertex -> encoded f_i
};

/// kind: opfibration.  A builtin construction (codomain | domain over a
/// backend) plus explicit cleavage overrides `u X lifted lambda`.
struct OpfibrationDoc {
    std::string builtin;
    std::string backend;
    std::vector<std::array<int, 4>> cleavage;
};

/// kind: morphism-class.  A named set of morphism ids.
struct MorphismClassDoc {
    std::string name;
    std::vector<MorId> members;
};

using Document = std::variant<CategoryDoc, QuiverDoc, RepMorphismDoc,
                              OpfibrationDoc, MorphismClassDoc>;

/// Parses any document kind; throws DocError with a 1-based line number.
Document parse_document(std::string_view text);

/// Canonical serialization; emit(parse_document(emit(d))) is byte-identical
/// to emit(d).
std::string emit(const Document& d);

std::string emit_category(const CategoryDoc& d);
std::string emit_quiver(const QuiverDoc& d);
std::string emit_rep_morphism(const RepMorphismDoc& d);
std::string emit_opfibration(const OpfibrationDoc& d);
std::string emit_morphism_class(const MorphismClassDoc& d);

}  // namespace wald
