#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace ctxk::harness {

using BitTriple = std::array<int, 3>;

inline int triple_parity(const BitTriple& t) { return (t[0] ^ t[1] ^ t[2]) & 1; }

inline std::string triple_string(const BitTriple& t) {
    return {char('0' + t[0]), char('0' + t[1]), char('0' + t[2])};
}

// The eight context preparations split by the label rule Y = C0 xor C1 xor C2.
// Within each class every single-bit and pair marginal is uniform when the
// four triples are equiprobable, so the label is carried by the full triple
// only.
struct ContextEnsemble {
    std::vector<BitTriple> even_class;
    std::vector<BitTriple> odd_class;

    static ContextEnsemble parity() {
        ContextEnsemble e;
        for (int v = 0; v < 8; ++v) {
            BitTriple t{v & 1, (v >> 1) & 1, (v >> 2) & 1};
            if (triple_parity(t) == 0)
                e.even_class.push_back(t);
            else
                e.odd_class.push_back(t);
        }
        return e;
    }

    std::vector<BitTriple> all_triples() const {
        std::vector<BitTriple> out = even_class;
        out.insert(out.end(), odd_class.begin(), odd_class.end());
        return out;
    }
};

} // namespace ctxk::harness
