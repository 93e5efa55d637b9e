#include <algorithm>
#include <stdexcept>

#include "wtree/compilers.hpp"

namespace wtree {

using nlohmann::json;

const char* to_string(FieldEncoding e) {
    switch (e) {
        case FieldEncoding::UnsignedInt: return "unsigned-int";
        case FieldEncoding::IdSlot: return "id-slot";
        case FieldEncoding::CellSlot: return "cell-slot";
    }
    return "unknown";
}

FieldEncoding field_encoding_from_string(std::string_view s) {
    if (s == "unsigned-int") return FieldEncoding::UnsignedInt;
    if (s == "id-slot") return FieldEncoding::IdSlot;
    if (s == "cell-slot") return FieldEncoding::CellSlot;
    throw std::invalid_argument("unknown field encoding");
}

CriterionSchema::CriterionSchema(std::string name, std::size_t bit_count,
                                 std::vector<SchemaField> fields)
    : name_(std::move(name)), n_(bit_count), fields_(std::move(fields)) {
    // Fields must tile [0, n) in layout order with no gaps or overlaps.
    std::size_t cursor = 0;
    for (const SchemaField& f : fields_) {
        if (f.width == 0) throw std::invalid_argument("schema field width must be positive");
        if (f.offset != cursor) throw std::invalid_argument("schema fields must tile the input");
        cursor += f.width;
        for (const SchemaField& other : fields_) {
            if (&other != &f && other.name == f.name) {
                throw std::invalid_argument("duplicate schema field name");
            }
        }
    }
    if (cursor != n_) throw std::invalid_argument("schema fields must tile the input");
}

std::string CriterionSchema::canonical_json() const {
    json fields = json::array();
    for (const SchemaField& f : fields_) {
        fields.push_back({{"encoding", to_string(f.encoding)},
                          {"name", f.name},
                          {"offset", f.offset},
                          {"width", f.width}});
    }
    json j{{"fields", fields}, {"n", n_}, {"name", name_}};
    return j.dump();
}

Digest CriterionSchema::schema_id() const {
    std::string canon = canonical_json();
    return sha256(BytesView(reinterpret_cast<const std::uint8_t*>(canon.data()), canon.size()));
}

json CriterionSchema::to_json() const {
    json j = json::parse(canonical_json());
    j["schema_id"] = to_hex(BytesView(schema_id()));
    return j;
}

CriterionSchema CriterionSchema::from_json(const json& j) {
    std::vector<SchemaField> fields;
    for (const json& f : j.at("fields")) {
        fields.push_back({f.at("name").get<std::string>(), f.at("offset").get<std::size_t>(),
                          f.at("width").get<std::size_t>(),
                          field_encoding_from_string(f.at("encoding").get<std::string>())});
    }
    CriterionSchema schema(j.at("name").get<std::string>(), j.at("n").get<std::size_t>(),
                           std::move(fields));
    if (j.contains("schema_id") &&
        j["schema_id"].get<std::string>() != to_hex(BytesView(schema.schema_id()))) {
        throw std::invalid_argument("schema_id does not match schema contents");
    }
    return schema;
}

namespace {

std::uint64_t uint_value(const json& v, std::size_t width, const std::string& field) {
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() &&
                                   v.get<std::int64_t>() < 0)) {
        throw std::invalid_argument("field '" + field + "' needs an unsigned integer value");
    }
    if (width > 64) {
        throw std::invalid_argument("field '" + field + "' is too wide for integer packing; pass X as hex");
    }
    std::uint64_t value = v.get<std::uint64_t>();
    if (width < 64 && (value >> width) != 0) {
        throw std::invalid_argument("value for field '" + field + "' does not fit its width");
    }
    return value;
}

void pack_bits(InputWord& x, std::size_t offset, std::size_t width, std::uint64_t value) {
    for (std::size_t t = 0; t < width; ++t) {
        x.set_bit(offset + t, (value >> (width - 1 - t)) & 1);
    }
}

}  // namespace

InputWord CriterionSchema::pack(const json& field_values) const {
    if (!field_values.is_object()) {
        throw std::invalid_argument("field values must be a JSON object");
    }
    InputWord x = InputWord::zeros(n_);

    if (field_values.contains("polygon")) {
        for (const auto& [key, value] : field_values.items()) {
            if (key != "polygon" && key != "maxCells") {
                throw std::invalid_argument("polygon packing accepts only polygon and maxCells");
            }
        }
        std::vector<const SchemaField*> slots;
        for (const SchemaField& f : fields_) {
            if (f.encoding != FieldEncoding::CellSlot) {
                throw std::invalid_argument("polygon packing requires an all-cell-slot schema");
            }
            if (f.width != fields_.front().width || f.width < 10 || (f.width - 8) % 2 != 0) {
                throw std::invalid_argument("cell-slot fields must share one (8 + 2w)-bit width");
            }
            slots.push_back(&f);
        }
        if (slots.empty()) throw std::invalid_argument("schema has no cell-slot fields");
        unsigned w = static_cast<unsigned>((slots.front()->width - 8) / 2);
        std::size_t max_cells = slots.size();
        if (field_values.contains("maxCells")) {
            max_cells = field_values["maxCells"].get<std::size_t>();
            if (max_cells > slots.size()) {
                throw std::invalid_argument("maxCells exceeds the schema's slot count");
            }
        }
        std::vector<std::pair<std::int64_t, std::int64_t>> vertices;
        for (const json& v : field_values["polygon"]) {
            vertices.emplace_back(v.at(0).get<std::int64_t>(), v.at(1).get<std::int64_t>());
        }
        PolygonCover cover = polygon_to_cells(vertices, max_cells, w);
        for (std::size_t i = 0; i < cover.cells.size(); ++i) {
            pack_bits(x, slots[i]->offset, 8, cover.cells[i].depth);
            pack_bits(x, slots[i]->offset + 8, 2 * w, cover.cells[i].prefix);
        }
        return x;
    }

    for (const auto& [key, value] : field_values.items()) {
        auto it = std::find_if(fields_.begin(), fields_.end(),
                               [&](const SchemaField& f) { return f.name == key; });
        if (it == fields_.end()) {
            throw std::invalid_argument("unknown schema field '" + key + "'");
        }
        switch (it->encoding) {
            case FieldEncoding::UnsignedInt:
                pack_bits(x, it->offset, it->width, uint_value(value, it->width, key));
                break;
            case FieldEncoding::IdSlot:
                if (value.is_string()) {
                    pack_bits(x, it->offset, it->width,
                              domain_id(value.get<std::string>(),
                                        static_cast<unsigned>(it->width)));
                } else {
                    pack_bits(x, it->offset, it->width, uint_value(value, it->width, key));
                }
                break;
            case FieldEncoding::CellSlot: {
                if (!value.is_object() || !value.contains("depth") || !value.contains("prefix")) {
                    throw std::invalid_argument("cell-slot field '" + key +
                                                "' needs {\"depth\", \"prefix\"}");
                }
                std::uint64_t depth = uint_value(value["depth"], 8, key);
                std::uint64_t prefix = uint_value(value["prefix"], it->width - 8, key);
                pack_bits(x, it->offset, 8, depth);
                pack_bits(x, it->offset + 8, it->width - 8, prefix);
                break;
            }
        }
    }
    return x;
}

std::uint64_t domain_id(std::string_view name, unsigned bits) {
    if (bits < 1 || bits > 64) throw std::invalid_argument("id width out of range (1..64)");
    Digest d = sha256(BytesView(reinterpret_cast<const std::uint8_t*>(name.data()), name.size()));
    std::uint64_t value = 0;
    for (unsigned i = 0; i < (bits + 7) / 8; ++i) value = value << 8 | d[i];
    value >>= (8 * ((bits + 7) / 8) - bits);
    if (value == 0) {
        throw std::invalid_argument("domain name hashes to the reserved empty id 0");
    }
    return value;
}

namespace {

std::vector<SchemaField> slot_fields(const std::string& stem, std::size_t count,
                                     std::size_t width, FieldEncoding encoding) {
    std::vector<SchemaField> fields;
    fields.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        fields.push_back({stem + std::to_string(i), i * width, width, encoding});
    }
    return fields;
}

}  // namespace

CompiledPredicate compile_predicate(const json& spec) {
    const std::string type = spec.at("type").get<std::string>();

    if (type == "ageInRange") {
        unsigned w = spec.value("width", 8u);
        std::uint64_t age = spec.at("age").get<std::uint64_t>();
        CriterionSchema schema(type, 2 * std::size_t{w},
                               {{"minAge", 0, w, FieldEncoding::UnsignedInt},
                                {"maxAge", w, w, FieldEncoding::UnsignedInt}});
        return {compile_range_membership(age, w), std::move(schema)};
    }
    if (type == "bankBalanceAtLeast") {
        unsigned w = spec.value("width", 32u);
        std::uint64_t balance = spec.at("balance").get<std::uint64_t>();
        CriterionSchema schema(type, w, {{"minBalance", 0, w, FieldEncoding::UnsignedInt}});
        return {compile_at_least(balance, w), std::move(schema)};
    }
    if (type == "visitedAnySite") {
        unsigned b = spec.value("idBits", 32u);
        std::size_t k = spec.value("slots", std::size_t{4});
        std::set<std::uint64_t> visited;
        for (const json& site : spec.at("visited")) {
            visited.insert(site.is_string() ? domain_id(site.get<std::string>(), b)
                                            : site.get<std::uint64_t>());
        }
        CriterionSchema schema(type, k * b, slot_fields("site", k, b, FieldEncoding::IdSlot));
        return {compile_any_slot_in_set(visited, k, b), std::move(schema)};
    }
    if (type == "houseInPoly") {
        unsigned w = spec.value("coordBits", 16u);
        std::size_t k = spec.value("slots", std::size_t{8});
        std::uint64_t lat = spec.at("lat").get<std::uint64_t>();
        std::uint64_t lon = spec.at("lon").get<std::uint64_t>();
        CriterionSchema schema(type, k * (8 + 2 * std::size_t{w}),
                               slot_fields("cell", k, 8 + 2 * std::size_t{w},
                                           FieldEncoding::CellSlot));
        return {compile_point_in_cells(lat, lon, k, w), std::move(schema)};
    }
    auto raw_input_schema = [&](std::size_t n) {
        std::vector<SchemaField> fields;
        if (n > 0) fields.push_back({"input", 0, n, FieldEncoding::UnsignedInt});
        return CriterionSchema(type, n, std::move(fields));
    };
    if (type == "dfa") {
        std::size_t n = spec.at("bits").get<std::size_t>();
        Dfa dfa;
        for (const json& row : spec.at("transitions")) {
            dfa.transitions.push_back({row.at(0).get<std::uint32_t>(),
                                       row.at(1).get<std::uint32_t>()});
        }
        dfa.initial = spec.value("initial", 0u);
        for (const json& a : spec.at("accept")) {
            dfa.accept.push_back(Bytes{a.get<bool>() ? std::uint8_t{0x01} : std::uint8_t{0x00}});
        }
        return {compile_dfa(dfa, n), raw_input_schema(n)};
    }
    if (type == "wildcardSet") {
        std::vector<std::string> patterns =
            spec.at("patterns").get<std::vector<std::string>>();
        std::size_t n = spec.contains("bits") ? spec["bits"].get<std::size_t>()
                                              : (patterns.empty() ? 0 : patterns[0].size());
        Dfa dfa = wildcard_set_to_dfa(patterns, n);
        return {compile_dfa(dfa, n), raw_input_schema(n)};
    }
    throw std::invalid_argument("unknown predicate type '" + type + "'");
}

}  // namespace wtree
