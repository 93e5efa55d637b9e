#pragma once

#include <array>
#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "wtree/hash.hpp"
#include "wtree/obdd.hpp"

namespace wtree {

// ---------------------------------------------------------------------------
// Criterion schemas
// ---------------------------------------------------------------------------

enum class FieldEncoding { UnsignedInt, IdSlot, CellSlot };

const char* to_string(FieldEncoding e);
FieldEncoding field_encoding_from_string(std::string_view s);

struct SchemaField {
    std::string name;
    std::size_t offset = 0;  // bit offset
    std::size_t width = 0;   // bit width
    FieldEncoding encoding = FieldEncoding::UnsignedInt;

    friend bool operator==(const SchemaField&, const SchemaField&) = default;
};

/// Bit layout of the criterion encoding X that buyer and seller must agree
/// on. Identified by the SHA-256 of its canonical JSON serialization.
class CriterionSchema {
public:
    CriterionSchema(std::string name, std::size_t bit_count, std::vector<SchemaField> fields);

    const std::string& name() const { return name_; }
    std::size_t bit_count() const { return n_; }
    const std::vector<SchemaField>& fields() const { return fields_; }

    std::string canonical_json() const;
    Digest schema_id() const;

    nlohmann::json to_json() const;  // includes schema_id in lowercase hex
    static CriterionSchema from_json(const nlohmann::json& j);

    /// Packs named field values into an InputWord. Integer values fill the
    /// field MSB-first, strings on id-slot fields are hashed to ids, and
    /// cell-slot fields take {"depth": d, "prefix": p}. A document of the
    /// form {"polygon": [[lat, lon], ...], "maxCells": m} fills cell-slot
    /// fields from a quadtree cover. Omitted fields stay zero.
    InputWord pack(const nlohmann::json& field_values) const;

    friend bool operator==(const CriterionSchema&, const CriterionSchema&) = default;

private:
    std::string name_;
    std::size_t n_;
    std::vector<SchemaField> fields_;
};

/// First `bits` bits of SHA-256(name) as an unsigned integer, bits in
/// [1, 64]. Throws if the truncation lands on 0 (the reserved empty id);
/// collisions between distinct names are accepted.
std::uint64_t domain_id(std::string_view name, unsigned bits);

// ---------------------------------------------------------------------------
// Predicate compilers. The buyer's criterion is the diagram input X; the
// seller's attribute value is baked into the diagram.
// ---------------------------------------------------------------------------

/// X = min (w bits) || max (w bits); true iff min <= attr <= max.
/// Reduced size stays within 4 internal nodes per level.
Qrobdd compile_range_membership(std::uint64_t attr, unsigned width);

/// X = min (w bits); true iff attr >= min. At most 3 internal nodes per level.
Qrobdd compile_at_least(std::uint64_t attr, unsigned width);

/// X = k slots of b bits; true iff some slot's value is in attr_set. The
/// all-zero slot is the reserved empty value, so 0 may not be a member.
Qrobdd compile_any_slot_in_set(const std::set<std::uint64_t>& attr_set, std::size_t slot_count,
                               unsigned slot_bits);

/// X = k slots of (depth: 8 bits, prefix: 2w bits). The attribute location
/// is Morton-interleaved (lat bit j before lon bit j, MSB-first) into a
/// 2w-bit code m; a slot matches iff 1 <= depth <= 2w and the prefix's first
/// `depth` bits equal m's. depth = 0 is the reserved empty slot.
Qrobdd compile_point_in_cells(std::uint64_t lat, std::uint64_t lon, std::size_t slot_count,
                              unsigned coord_bits);

std::uint64_t morton_encode(std::uint64_t lat, std::uint64_t lon, unsigned coord_bits);

/// Quadtree cell over the w-bit coordinate square: `depth` Morton bits of
/// prefix, left-aligned within the 2w-bit prefix field.
struct CellSlot {
    std::uint8_t depth = 0;
    std::uint64_t prefix = 0;

    friend bool operator==(const CellSlot&, const CellSlot&) = default;
};

struct PolygonCover {
    std::vector<CellSlot> cells;
    /// Emitted-cell area over polygon area; near 0 warns that the polygon
    /// eroded away (e.g. a sliver thinner than a max-depth cell).
    double coverage_ratio = 0.0;
};

/// Conservative quadtree cover of a convex counterclockwise polygon, with
/// vertices as (lat, lon) fixed-point pairs in [0, 2^w]. Cells are emitted
/// when fully inside, or at max depth (single coordinate cell) with center
/// inside. On overflow the deepest cells are dropped first.
PolygonCover polygon_to_cells(const std::vector<std::pair<std::int64_t, std::int64_t>>& vertices,
                              std::size_t max_cells, unsigned coord_bits);

// ---------------------------------------------------------------------------
// Automaton-backed predicates
// ---------------------------------------------------------------------------

/// Deterministic finite automaton over the alphabet {0, 1} with a result
/// payload per state.
struct Dfa {
    std::vector<std::array<std::uint32_t, 2>> transitions;  // [state][bit]
    std::uint32_t initial = 0;
    std::vector<Bytes> accept;  // payload read after consuming the input

    std::size_t state_count() const { return transitions.size(); }
};

/// Runs the automaton over all n input bits; the diagram evaluates to the
/// acceptance payload of the reached state. Result is reduced.
Qrobdd compile_dfa(const Dfa& dfa, std::size_t bit_count);

/// Subset automaton accepting inputs matched positionwise by at least one
/// pattern. Patterns are fixed-length strings over '0', '1' and '*'
/// (wildcard); states are canonicalized by their residual suffix sets.
Dfa wildcard_set_to_dfa(const std::vector<std::string>& patterns, std::size_t bit_count);

// ---------------------------------------------------------------------------
// Predicate specification documents (CLI surface)
// ---------------------------------------------------------------------------

struct CompiledPredicate {
    Qrobdd diagram;
    CriterionSchema schema;
};

/// Compiles a predicate specification JSON document:
///   {"type": "ageInRange" | "bankBalanceAtLeast" | "visitedAnySite" |
///            "houseInPoly" | "dfa" | "wildcardSet", ...}
/// into a diagram plus the criterion schema the buyer packs X against.
CompiledPredicate compile_predicate(const nlohmann::json& spec);

}  // namespace wtree
