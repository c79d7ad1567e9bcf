#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "bookem/spherecut.hpp"

namespace bookem {

// ---------------------------------------------------------------------------
// Dyck words <-> non-crossing matchings
// ---------------------------------------------------------------------------

/// Bracket word of a matching over a circular order, read from start in the
/// given direction; roles are relative to the start (first endpoint opens).
/// Unmatched elements are skipped. Throws when the matching crosses.
std::string dyck_encode(const std::vector<std::pair<int, int>>& matching,
                        const std::vector<int>& order, int start, bool clockwise);

/// Inverse of dyck_encode: pairs up the matched elements of the order (the
/// word's i-th bracket belongs to the i-th matched element in walk order).
std::vector<std::pair<int, int>> dyck_decode(const std::string& word,
                                             const std::vector<int>& matched_in_walk_order);

// ---------------------------------------------------------------------------
// SPQR-node types: (psi, M, S) over the hexagon (s, r, r', t, l', l)
// ---------------------------------------------------------------------------

/// Hexagon slot ids in circular order.
enum : int { SLOT_S = 0, SLOT_R = 1, SLOT_RP = 2, SLOT_T = 3, SLOT_LP = 4, SLOT_L = 5 };

struct SpqrType {
    uint8_t psi_l = 0;  // |psi(L)|: 0 none, 1 -> {l}, 2 -> {l,l'}
    uint8_t psi_r = 0;
    std::array<int8_t, 6> match{{-1, -1, -1, -1, -1, -1}};  // partner slot or -1
    bool s_in_S = false, t_in_S = false;

    bool slot_exists(int slot) const;
    bool valid() const;
    uint32_t key() const;
    SpqrType mirrored() const;  // swap l<->r and l'<->r'

    int count_L() const { return psi_l; }
    int count_R() const { return psi_r; }
    int count_s() const { return s_in_S ? 2 : (match[SLOT_S] != -1 ? 1 : 0); }
    int count_t() const { return t_in_S ? 2 : (match[SLOT_T] != -1 ? 1 : 0); }
    bool dirty() const { return count_s() + count_t() > 0; }
    /// x-good: clean with M empty / {lr} / {lr, l'r'}; -1 when not good.
    int goodness() const;
    bool operator==(const SpqrType& o) const { return key() == o.key(); }
    bool operator<(const SpqrType& o) const { return key() < o.key(); }
};

SpqrType make_spqr_type(int psi_l, int psi_r, const std::vector<std::pair<int, int>>& pairs,
                        bool s_in_S, bool t_in_S);

/// Every structurally valid (psi, M, S) triple.
const std::vector<SpqrType>& all_spqr_types();

/// The fixed table of a leaf Q-node (both endpoints are poles, the pertinent
/// graph is one real edge).
const std::vector<SpqrType>& q_node_type_table();

std::string describe(const SpqrType& t);

// ---------------------------------------------------------------------------
// Noose types: (psi, M, S) over a weak noose
// ---------------------------------------------------------------------------

/// Roles are relative to the noose's canonical start and direction.
enum class VRole : uint8_t { Free = 0, InS = 1, Open = 2, Close = 3 };

struct NooseType {
    std::vector<uint8_t> vrole;  // per boundary vertex position (VRole)
    std::vector<uint8_t> psi;    // per subcurve position: 0..2 crossing points
    std::vector<uint8_t> crole;  // flattened crossing roles in walk order (Open/Close)

    bool full(int noose_size) const;
    bool empty_type() const;
    std::string key() const;
    bool operator==(const NooseType& o) const {
        return vrole == o.vrole && psi == o.psi && crole == o.crole;
    }
    bool operator<(const NooseType& o) const { return key() < o.key(); }
};

/// Endpoint of a path segment: a boundary vertex or a crossing point.
/// Crossing points are local to a subcurve, index 0 nearer the smaller
/// endpoint of the curve.
struct Token {
    bool is_cross = false;
    int a = -1;  // vertex id, or subcurve id
    int b = 0;   // crossing index 0/1
    bool operator==(const Token& o) const {
        return is_cross == o.is_cross && a == o.a && b == o.b;
    }
    bool operator<(const Token& o) const {
        if (is_cross != o.is_cross) return is_cross < o.is_cross;
        if (a != o.a) return a < o.a;
        return b < o.b;
    }
};

/// Matching and S of a type in token form.
struct TypeView {
    std::vector<std::pair<Token, Token>> matching;
    std::set<Vertex> in_s;
    std::map<int, int> psi_of_curve;  // curve id -> crossing count
    bool full = false;
    bool empty = false;
};

TypeView view_type(const SubcurveTable& table, const WeakNoose& noose, const NooseType& type);

/// Reassemble a NooseType from token data; nullopt when the matching crosses
/// the noose's circular order.
std::optional<NooseType> type_from_view(const SubcurveTable& table, const WeakNoose& noose,
                                        const std::vector<std::pair<Token, Token>>& matching,
                                        const std::set<Vertex>& in_s,
                                        const std::map<int, int>& psi_of_curve);

/// Every structurally valid type on the noose (role assignments filtered by
/// circular bracket validity). Intended for small nooses only.
std::vector<NooseType> enumerate_types(const SubcurveTable& table, const WeakNoose& noose);

/// The six compatibility conditions for types on o1 = ctx.o1 and o2 = ctx.o2.
bool check_compatible(const SubcurveTable& table, const NoosePairContext& ctx,
                      const NooseType& x1, const NooseType& x2);

/// Combined type on ctx.result; pre: check_compatible.
NooseType combine_types(const SubcurveTable& table, const NoosePairContext& ctx,
                        const NooseType& x1, const NooseType& x2);

/// All (X, X1, X2) with X1 compatible with X2 and X = X1 o X2, by exhaustive
/// enumeration over both sides. Small nooses only.
std::vector<std::array<NooseType, 3>> enumerate_triples(const SubcurveTable& table,
                                                        const NoosePairContext& ctx);

}  // namespace bookem
