#include "wtree/compilers.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <stdexcept>

namespace wtree {

namespace {

// Single-character state tags for the comparison machines. build_layered
// merges states with byte-identical codes, so each tag must identify the
// state up to the level it lives on.
constexpr std::uint8_t kEqual = 'E';       // prefixes equal so far
constexpr std::uint8_t kBelow = 'L';       // X prefix already below attr
constexpr std::uint8_t kDead = 'D';        // outcome fixed: false
constexpr std::uint8_t kMaxEqual = 'M';    // max-field prefix equal so far
constexpr std::uint8_t kTrue = 'T';        // outcome fixed: true

Bytes tag(std::uint8_t t) { return Bytes{t}; }

bool attr_bit(std::uint64_t attr, unsigned width, std::size_t pos) {
    return (attr >> (width - 1 - pos)) & 1;
}

void check_width(unsigned width, unsigned max_width, std::uint64_t attr) {
    if (width < 1 || width > max_width) {
        throw std::invalid_argument("field width out of range");
    }
    if (width < 64 && (attr >> width) != 0) {
        throw std::invalid_argument("attribute value does not fit the field width");
    }
}

Bytes bool_payload(bool v) { return Bytes{v ? std::uint8_t{0x01} : std::uint8_t{0x00}}; }

}  // namespace

Qrobdd compile_range_membership(std::uint64_t attr, unsigned width) {
    check_width(width, 63, attr);
    const unsigned w = width;

    TransitionFn step = [attr, w](std::size_t level, const Bytes& state, bool bit) {
        std::uint8_t s = state[0];
        if (s == kDead || s == kTrue) return tag(s);
        if (level < w) {
            // min field: decide min <= attr
            bool a = attr_bit(attr, w, level);
            std::uint8_t next = s;
            if (s == kEqual) {
                if (bit != a) next = bit < a ? kBelow : kDead;
            }
            if (level == w - 1 && next != kDead) next = kMaxEqual;  // min <= attr settled
            return tag(next);
        }
        // max field: decide attr <= max
        bool a = attr_bit(attr, w, level - w);
        if (s == kMaxEqual && bit != a) return tag(bit > a ? kTrue : kDead);
        return tag(s);
    };
    FinalizeFn finalize = [](const Bytes& state) {
        return bool_payload(state[0] == kMaxEqual || state[0] == kTrue);
    };
    return reduce(build_layered(2 * std::size_t{w}, step, tag(kEqual), finalize));
}

Qrobdd compile_at_least(std::uint64_t attr, unsigned width) {
    check_width(width, 63, attr);
    const unsigned w = width;

    TransitionFn step = [attr, w](std::size_t level, const Bytes& state, bool bit) {
        std::uint8_t s = state[0];
        if (s != kEqual) return tag(s);
        bool a = attr_bit(attr, w, level);
        if (bit == a) return tag(kEqual);
        return tag(bit < a ? kBelow : kDead);
    };
    FinalizeFn finalize = [](const Bytes& state) { return bool_payload(state[0] != kDead); };
    return reduce(build_layered(w, step, tag(kEqual), finalize));
}

namespace {

constexpr std::uint8_t kMatched = 'M';
constexpr std::uint8_t kUnmatched = 'U';
constexpr std::uint8_t kSlotDead = 'S';
constexpr std::uint8_t kDepthAcc = 'D';
constexpr std::uint8_t kPrefixLive = 'P';

Bytes survivors_code(const std::vector<std::uint64_t>& members) {
    Bytes code{kUnmatched};
    for (std::uint64_t m : members) put_u64be(code, m);
    return code;
}

std::vector<std::uint64_t> survivors_of(const Bytes& code) {
    std::vector<std::uint64_t> out((code.size() - 1) / 8);
    ByteReader r{BytesView(code).subspan(1)};
    for (auto& m : out) m = r.u64be();
    return out;
}

}  // namespace

Qrobdd compile_any_slot_in_set(const std::set<std::uint64_t>& attr_set, std::size_t slot_count,
                               unsigned slot_bits) {
    if (attr_set.empty()) throw std::invalid_argument("attribute set must be non-empty");
    if (attr_set.count(0) != 0) {
        throw std::invalid_argument("0 is the reserved empty slot value and cannot be a member");
    }
    if (slot_bits < 1 || slot_bits > 64) throw std::invalid_argument("slot bit width out of range");
    if (slot_count < 1) throw std::invalid_argument("slot count must be positive");
    for (std::uint64_t m : attr_set) {
        if (slot_bits < 64 && (m >> slot_bits) != 0) {
            throw std::invalid_argument("member identifier does not fit the slot width");
        }
    }

    const unsigned b = slot_bits;
    const std::vector<std::uint64_t> all(attr_set.begin(), attr_set.end());
    const Bytes fresh = survivors_code(all);

    TransitionFn step = [b, &fresh](std::size_t level, const Bytes& state, bool bit) {
        if (state[0] == kMatched) return tag(kMatched);
        std::size_t pos = level % b;
        std::vector<std::uint64_t> next;
        for (std::uint64_t m : survivors_of(state)) {
            if (attr_bit(m, b, pos) == bit) next.push_back(m);
        }
        if (pos == b - 1) {
            return next.empty() ? fresh : tag(kMatched);
        }
        return survivors_code(next);
    };
    FinalizeFn finalize = [](const Bytes& state) { return bool_payload(state[0] == kMatched); };
    return reduce(build_layered(slot_count * b, step, fresh, finalize));
}

std::uint64_t morton_encode(std::uint64_t lat, std::uint64_t lon, unsigned coord_bits) {
    std::uint64_t code = 0;
    for (unsigned j = 0; j < coord_bits; ++j) {
        code = code << 1 | ((lat >> (coord_bits - 1 - j)) & 1);
        code = code << 1 | ((lon >> (coord_bits - 1 - j)) & 1);
    }
    return code;
}

Qrobdd compile_point_in_cells(std::uint64_t lat, std::uint64_t lon, std::size_t slot_count,
                              unsigned coord_bits) {
    if (coord_bits < 1 || coord_bits > 32) {
        throw std::invalid_argument("coordinate bit width out of range (1..32)");
    }
    if (slot_count < 1) throw std::invalid_argument("slot count must be positive");
    if ((coord_bits < 64 && (lat >> coord_bits) != 0) || (lon >> coord_bits) != 0) {
        throw std::invalid_argument("coordinate does not fit the bit width");
    }

    const unsigned m_bits = 2 * coord_bits;
    const std::uint64_t m = morton_encode(lat, lon, coord_bits);
    const std::size_t slot_width = 8 + m_bits;

    auto depth_state = [](std::uint16_t v) {
        Bytes code{kDepthAcc};
        put_u16be(code, v);
        return code;
    };
    auto prefix_state = [](std::uint8_t d) { return Bytes{kPrefixLive, d}; };

    TransitionFn step = [&](std::size_t level, const Bytes& state, bool bit) {
        if (state[0] == kMatched) return tag(kMatched);
        std::size_t pos = level % slot_width;
        Bytes next;
        if (state[0] == kSlotDead) {
            next = tag(kSlotDead);
        } else if (pos < 8) {
            // accumulating the 8-bit depth field
            std::uint16_t v = static_cast<std::uint16_t>(state[1] << 8 | state[2]);
            std::uint32_t acc = static_cast<std::uint32_t>(v) << 1 | (bit ? 1 : 0);
            unsigned remaining = 8 - static_cast<unsigned>(pos) - 1;
            if (remaining == 0) {
                next = (acc >= 1 && acc <= m_bits) ? prefix_state(static_cast<std::uint8_t>(acc))
                                                   : tag(kSlotDead);
            } else if ((static_cast<std::uint64_t>(acc) << remaining) > m_bits) {
                next = tag(kSlotDead);  // no completion can yield a usable depth
            } else {
                next = depth_state(static_cast<std::uint16_t>(acc));
            }
        } else {
            std::size_t p = pos - 8;
            std::uint8_t d = state[1];
            bool m_bit = (m >> (m_bits - 1 - p)) & 1;
            next = (p < d && bit != m_bit) ? tag(kSlotDead) : prefix_state(d);
        }
        if (pos == slot_width - 1) {
            // slot boundary: a surviving prefix state means the slot matched
            if (next[0] == kPrefixLive) return tag(kMatched);
            return depth_state(0);
        }
        return next;
    };
    FinalizeFn finalize = [](const Bytes& state) { return bool_payload(state[0] == kMatched); };
    return reduce(build_layered(slot_count * slot_width, step, depth_state(0), finalize));
}

namespace {

using Wide = __int128;

struct Pt {
    std::int64_t x;  // lat
    std::int64_t y;  // lon
};

Wide cross(const Pt& o, const Pt& a, const Pt& b) {
    return static_cast<Wide>(a.x - o.x) * (b.y - o.y) -
           static_cast<Wide>(a.y - o.y) * (b.x - o.x);
}

// All geometry below runs in doubled coordinates so cell centers stay integral.
bool point_inside(const std::vector<Pt>& poly2, const Pt& p) {
    for (std::size_t i = 0; i < poly2.size(); ++i) {
        const Pt& a = poly2[i];
        const Pt& b = poly2[(i + 1) % poly2.size()];
        if (cross(a, b, p) < 0) return false;
    }
    return true;
}

bool cell_disjoint(const std::vector<Pt>& poly2, const std::array<Pt, 4>& corners) {
    for (std::size_t i = 0; i < poly2.size(); ++i) {
        const Pt& a = poly2[i];
        const Pt& b = poly2[(i + 1) % poly2.size()];
        bool all_outside = true;
        for (const Pt& c : corners) {
            if (cross(a, b, c) >= 0) {
                all_outside = false;
                break;
            }
        }
        if (all_outside) return true;
    }
    return false;
}

bool cell_inside(const std::vector<Pt>& poly2, const std::array<Pt, 4>& corners) {
    return std::all_of(corners.begin(), corners.end(),
                       [&](const Pt& c) { return point_inside(poly2, c); });
}

struct FrontierCell {
    std::int64_t lat0;
    std::int64_t lon0;
    std::uint64_t prefix;
};

// Boundary-frontier guard for degenerate deep recursions; cells past the cap
// are dropped in Morton order, which only ever shrinks the cover.
constexpr std::size_t kFrontierCap = std::size_t{1} << 20;

}  // namespace

PolygonCover polygon_to_cells(const std::vector<std::pair<std::int64_t, std::int64_t>>& vertices,
                              std::size_t max_cells, unsigned coord_bits) {
    if (vertices.size() < 3) throw std::invalid_argument("polygon needs at least 3 vertices");
    if (coord_bits < 1 || coord_bits > 32) {
        throw std::invalid_argument("coordinate bit width out of range (1..32)");
    }
    if (max_cells < 1) throw std::invalid_argument("cell budget must be positive");

    std::vector<Pt> poly2(vertices.size());
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        poly2[i] = {2 * vertices[i].first, 2 * vertices[i].second};
    }
    Wide area4 = 0;  // shoelace over doubled coordinates = 4 * polygon area
    for (std::size_t i = 0; i < poly2.size(); ++i) {
        const Pt& a = poly2[i];
        const Pt& b = poly2[(i + 1) % poly2.size()];
        if (cross(poly2[(i + vertices.size() - 1) % vertices.size()], a, b) < 0) {
            throw std::invalid_argument("polygon must be convex and counterclockwise");
        }
        area4 += static_cast<Wide>(a.x) * b.y - static_cast<Wide>(b.x) * a.y;
    }

    const unsigned w = coord_bits;
    struct Emitted {
        unsigned level;
        std::uint64_t prefix;
    };
    std::vector<Emitted> emitted;
    std::vector<FrontierCell> frontier{{0, 0, 0}};
    bool budget_hit = false;

    for (unsigned level = 0; level <= w && !frontier.empty() && !budget_hit; ++level) {
        const std::int64_t size = std::int64_t{1} << (w - level);
        std::vector<FrontierCell> next;
        for (const FrontierCell& cell : frontier) {
            std::array<Pt, 4> corners = {
                Pt{2 * cell.lat0, 2 * cell.lon0},
                Pt{2 * (cell.lat0 + size), 2 * cell.lon0},
                Pt{2 * (cell.lat0 + size), 2 * (cell.lon0 + size)},
                Pt{2 * cell.lat0, 2 * (cell.lon0 + size)},
            };
            if (cell_disjoint(poly2, corners)) continue;
            if (level > 0 && cell_inside(poly2, corners)) {
                emitted.push_back({level, cell.prefix});
            } else if (level == w) {
                Pt center{2 * cell.lat0 + 1, 2 * cell.lon0 + 1};
                if (point_inside(poly2, center)) emitted.push_back({level, cell.prefix});
            } else {
                for (int child = 0; child < 4 && next.size() < kFrontierCap; ++child) {
                    std::int64_t half = size / 2;
                    std::int64_t lat_hi = (child >> 1) & 1;
                    std::int64_t lon_hi = child & 1;
                    next.push_back({cell.lat0 + lat_hi * half, cell.lon0 + lon_hi * half,
                                    cell.prefix << 2 | static_cast<std::uint64_t>(child)});
                }
            }
            if (emitted.size() >= max_cells) {
                budget_hit = true;  // anything emitted later would be deeper, hence dropped
                break;
            }
        }
        frontier = std::move(next);
    }

    if (emitted.size() > max_cells) emitted.resize(max_cells);

    PolygonCover cover;
    unsigned __int128 covered = 0;  // sum of cell areas in original units
    for (const Emitted& e : emitted) {
        std::uint64_t size = std::uint64_t{1} << (w - e.level);
        covered += static_cast<unsigned __int128>(size) * size;
        cover.cells.push_back({static_cast<std::uint8_t>(2 * e.level),
                               e.prefix << (2 * w - 2 * e.level)});
    }
    if (area4 > 0) {
        // shoelace over doubled coordinates = 8 * polygon area
        cover.coverage_ratio =
            std::min(1.0, 8.0 * static_cast<double>(covered) / static_cast<double>(area4));
    }
    return cover;
}

Qrobdd compile_dfa(const Dfa& dfa, std::size_t bit_count) {
    if (dfa.transitions.empty()) throw std::invalid_argument("automaton needs at least one state");
    if (dfa.accept.size() != dfa.state_count()) {
        throw std::invalid_argument("acceptance map must cover every state");
    }
    if (dfa.initial >= dfa.state_count()) throw std::invalid_argument("initial state out of range");
    for (const auto& t : dfa.transitions) {
        if (t[0] >= dfa.state_count() || t[1] >= dfa.state_count()) {
            throw std::invalid_argument("transition target out of range");
        }
    }

    auto code_of = [](std::uint32_t state) {
        Bytes code;
        put_u32be(code, state);
        return code;
    };
    auto state_of = [](const Bytes& code) {
        return ByteReader{BytesView(code)}.u32be();
    };

    TransitionFn step = [&](std::size_t, const Bytes& state, bool bit) {
        return code_of(dfa.transitions[state_of(state)][bit ? 1 : 0]);
    };
    FinalizeFn finalize = [&](const Bytes& state) { return dfa.accept[state_of(state)]; };
    return reduce(build_layered(bit_count, step, code_of(dfa.initial), finalize));
}

Dfa wildcard_set_to_dfa(const std::vector<std::string>& patterns, std::size_t bit_count) {
    std::set<std::string> initial_set;
    for (const std::string& p : patterns) {
        if (p.size() != bit_count) throw std::invalid_argument("inconsistent pattern lengths");
        for (char c : p) {
            if (c != '0' && c != '1' && c != '*') {
                throw std::invalid_argument("pattern characters must be 0, 1 or *");
            }
        }
        initial_set.insert(p);
    }

    // Subset construction keyed by residual suffix sets; equal suffix sets
    // are one state regardless of which patterns produced them.
    std::map<std::set<std::string>, std::uint32_t> ids;
    std::vector<std::set<std::string>> states;
    std::deque<std::uint32_t> queue;
    auto intern = [&](std::set<std::string> s) {
        auto [it, fresh] = ids.emplace(std::move(s), static_cast<std::uint32_t>(states.size()));
        if (fresh) {
            states.push_back(it->first);
            queue.push_back(it->second);
        }
        return it->second;
    };

    Dfa dfa;
    dfa.initial = intern(std::move(initial_set));
    while (!queue.empty()) {
        std::uint32_t id = queue.front();
        queue.pop_front();
        const std::set<std::string> current = states[id];  // intern below may reallocate states
        std::array<std::uint32_t, 2> row;
        for (int bit = 0; bit < 2; ++bit) {
            std::set<std::string> next;
            for (const std::string& s : current) {
                if (!s.empty() && (s[0] == '*' || s[0] == ('0' + bit))) {
                    next.insert(s.substr(1));
                }
            }
            row[bit] = intern(std::move(next));
        }
        if (dfa.transitions.size() <= id) dfa.transitions.resize(id + 1);
        dfa.transitions[id] = row;
    }
    dfa.transitions.resize(states.size());
    dfa.accept.reserve(states.size());
    for (const auto& s : states) {
        dfa.accept.push_back(bool_payload(s.count("") != 0));
    }
    return dfa;
}

}  // namespace wtree
