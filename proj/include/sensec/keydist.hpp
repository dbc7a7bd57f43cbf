#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "sensec/errors.hpp"
#include "sensec/gf80.hpp"
#include "sensec/rng.hpp"

// Polynomial pairwise key predistribution. A certificate authority holds a
// symmetric bivariate polynomial f(x, y) of degree t over GF(p); node `id`
// is provisioned with the coefficients of g_id(x) = f(x, id); two nodes
// derive a common secret by evaluating their share at the peer's identity.
// Reconstruction of f from t+1 captured shares lives here too — it is the
// attack oracle that demonstrates the collusion threshold, not node code.

namespace sensec::keydist {

using gf80::FieldElement;
using gf80::NodeId;

// Predistributed key material of one node: t+1 coefficients of g_id,
// constant term first.
struct NodeShare {
    NodeId id;
    std::vector<FieldElement> coeffs;

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
};

struct PairwiseSecret {
    FieldElement value;

    std::array<std::uint8_t, 10> bytes() const { return gf80::encode(value); }
};

class MasterPolynomial {
public:
    // Coefficients of the upper triangle are drawn uniformly from GF(p) by a
    // Serpent-CTR stream keyed with `seed`, then mirrored. Same seed, same
    // polynomial.
    static MasterPolynomial generate(int degree, std::span<const std::uint8_t> seed) {
        if (degree < 1 || degree > 1000) throw DegreeOutOfRange(degree);
        MasterPolynomial m;
        m.degree_ = degree;
        const int n = degree + 1;
        m.coeffs_.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), FieldElement{});
        SerpentStream stream(seed);
        for (int i = 0; i < n; ++i) {
            for (int j = i; j < n; ++j) {
                const FieldElement c = stream.uniform_field_element();
                m.at(i, j) = c;
                m.at(j, i) = c;
            }
        }
        return m;
    }

    static MasterPolynomial from_parts(int degree, std::vector<FieldElement> coeffs,
                                       std::set<std::uint16_t> issued) {
        if (degree < 1 || degree > 1000) throw DegreeOutOfRange(degree);
        const std::size_t n = static_cast<std::size_t>(degree) + 1;
        if (coeffs.size() != n * n) throw Error("coefficient matrix has wrong size");
        MasterPolynomial m;
        m.degree_ = degree;
        m.coeffs_ = std::move(coeffs);
        m.issued_ = std::move(issued);
        return m;
    }

    int degree() const { return degree_; }
    FieldElement coeff(int i, int j) const { return coeffs_[index(i, j)]; }
    std::span<const FieldElement> coeffs() const { return coeffs_; }
    const std::set<std::uint16_t>& issued_ids() const { return issued_; }

    bool symmetric() const {
        for (int i = 0; i <= degree_; ++i)
            for (int j = i + 1; j <= degree_; ++j)
                if (!(coeff(i, j) == coeff(j, i))) return false;
        return true;
    }

    // Share of node `id`: coeffs[i] = sum_j a_ij * id^j. The id is recorded
    // as issued; reusing it is an error (the CA owns id uniqueness).
    NodeShare derive_share(NodeId id) {
        if (!gf80::node_id_valid(id.value)) throw InvalidId(id.value);
        if (issued_.contains(id.value)) throw DuplicateId(id.value);
        NodeShare share;
        share.id = id;
        share.coeffs.reserve(static_cast<std::size_t>(degree_) + 1);
        std::vector<FieldElement> row_high_first(static_cast<std::size_t>(degree_) + 1);
        for (int i = 0; i <= degree_; ++i) {
            for (int j = 0; j <= degree_; ++j)
                row_high_first[static_cast<std::size_t>(degree_ - j)] = coeff(i, j);
            share.coeffs.push_back(gf80::horner_eval(row_high_first, id));
        }
        issued_.insert(id.value);
        return share;
    }

    // Direct evaluation of f(a, b); used by the attack path to predict the
    // secret of a pair from a (possibly fabricated) coefficient matrix.
    FieldElement evaluate(NodeId a, NodeId b) const {
        std::vector<FieldElement> outer(static_cast<std::size_t>(degree_) + 1);
        std::vector<FieldElement> row_high_first(static_cast<std::size_t>(degree_) + 1);
        for (int i = 0; i <= degree_; ++i) {
            for (int j = 0; j <= degree_; ++j)
                row_high_first[static_cast<std::size_t>(degree_ - j)] = coeff(i, j);
            outer[static_cast<std::size_t>(degree_ - i)] = gf80::horner_eval(row_high_first, a);
        }
        return gf80::horner_eval(outer, b);
    }

private:
    MasterPolynomial() = default;

    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(i) * (static_cast<std::size_t>(degree_) + 1) +
               static_cast<std::size_t>(j);
    }
    FieldElement& at(int i, int j) { return coeffs_[index(i, j)]; }

    int degree_ = 0;
    std::vector<FieldElement> coeffs_;  // (t+1)^2, row-major
    std::set<std::uint16_t> issued_;
};

// The node-side operation: g_id evaluated at the peer's identity. Symmetry
// of f guarantees both directions agree.
inline PairwiseSecret pairwise_secret(const NodeShare& share, NodeId peer) {
    if (!gf80::node_id_valid(peer.value)) throw InvalidId(peer.value);
    if (peer.value == share.id.value) throw SelfPairing();
    std::vector<FieldElement> high_first(share.coeffs.rbegin(), share.coeffs.rend());
    return PairwiseSecret{gf80::horner_eval(high_first, peer)};
}

namespace detail {

// Coefficient-form Lagrange interpolation helpers. Polynomials are stored
// highest degree first; sample points are node ids, so the inner products
// stay on the short-by-long multiplication path.

inline std::vector<FieldElement> multiply_by_root(std::span<const FieldElement> poly, NodeId c) {
    // poly * (x - c)
    std::vector<FieldElement> out(poly.size() + 1);
    out[0] = poly[0];
    for (std::size_t i = 1; i < poly.size(); ++i)
        out[i] = gf80::sub(poly[i], gf80::mul_small(c, poly[i - 1]));
    out[poly.size()] = gf80::sub(FieldElement{}, gf80::mul_small(c, poly.back()));
    return out;
}

inline std::vector<FieldElement> divide_by_root(std::span<const FieldElement> poly, NodeId c) {
    // poly / (x - c) for a poly with root c (remainder discarded)
    std::vector<FieldElement> out(poly.size() - 1);
    out[0] = poly[0];
    for (std::size_t i = 1; i + 1 < poly.size(); ++i)
        out[i] = gf80::add(poly[i], gf80::mul_small(c, out[i - 1]));
    return out;
}

struct LagrangeBasis {
    std::vector<std::vector<FieldElement>> numerators;  // per point, high-first
    std::vector<FieldElement> scaled_inverses;          // 1 / prod_{j!=k}(x_k - x_j)
    std::vector<NodeId> points;
};

inline LagrangeBasis build_basis(std::span<const NodeId> xs) {
    LagrangeBasis basis;
    basis.points.assign(xs.begin(), xs.end());
    std::vector<FieldElement> full{FieldElement{1}};
    for (NodeId x : xs) full = multiply_by_root(full, x);
    for (NodeId x : xs) {
        auto numerator = divide_by_root(full, x);
        basis.scaled_inverses.push_back(gf80::inv(gf80::horner_eval(numerator, x)));
        basis.numerators.push_back(std::move(numerator));
    }
    return basis;
}

// Interpolated polynomial through (x_k, ys[k]), returned constant term first.
inline std::vector<FieldElement> interpolate(const LagrangeBasis& basis,
                                             std::span<const FieldElement> ys) {
    const std::size_t n = basis.points.size();
    std::vector<FieldElement> acc(n);  // high-first
    for (std::size_t k = 0; k < n; ++k) {
        const FieldElement scale = gf80::mul(ys[k], basis.scaled_inverses[k]);
        for (std::size_t i = 0; i < n; ++i)
            acc[i] = gf80::add(acc[i], gf80::mul(scale, basis.numerators[k][i]));
    }
    return {acc.rbegin(), acc.rend()};
}

inline std::vector<FieldElement> interpolate_matrix(std::span<const NodeShare> shares) {
    const int t = shares[0].degree();
    const std::size_t n = static_cast<std::size_t>(t) + 1;
    std::vector<NodeId> xs;
    for (std::size_t k = 0; k < n; ++k) xs.push_back(shares[k].id);
    const LagrangeBasis basis = build_basis(xs);
    std::vector<FieldElement> matrix(n * n);
    std::vector<FieldElement> ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) ys[k] = shares[k].coeffs[i];
        const auto row = interpolate(basis, ys);
        for (std::size_t j = 0; j < n; ++j) matrix[i * n + j] = row[j];
    }
    return matrix;
}

inline void check_share_set(std::span<const NodeShare> shares) {
    if (shares.empty()) throw InsufficientShares(0, 1);
    const int t = shares[0].degree();
    if (t < 1) throw InconsistentShares();
    std::set<std::uint16_t> seen;
    for (const auto& s : shares) {
        if (s.degree() != t) throw InconsistentShares();
        if (!seen.insert(s.id.value).second) throw DuplicateId(s.id.value);
    }
}

}  // namespace detail

// Attack oracle: recover the CA's full coefficient matrix from t+1 shares by
// interpolating, per coefficient index, the degree-t polynomial id -> g_id
// coefficient. Fails with InsufficientShares when only t or fewer shares are
// held; a non-symmetric result signals shares from different masters.
inline MasterPolynomial reconstruct_master(std::span<const NodeShare> shares) {
    detail::check_share_set(shares);
    const int t = shares[0].degree();
    const std::size_t need = static_cast<std::size_t>(t) + 1;
    if (shares.size() < need) throw InsufficientShares(shares.size(), need);
    auto matrix = detail::interpolate_matrix(shares.subspan(0, need));
    auto master = MasterPolynomial::from_parts(t, std::move(matrix), {});
    if (!master.symmetric()) throw InconsistentShares();
    return master;
}

// Best-effort prediction of the pairwise secret of (a, b) from captured
// shares. With t+1 or more shares the prediction is exact; with fewer, the
// missing sample points are filled with uniformly random fabricated shares,
// i.e. an arbitrary candidate consistent with everything captured.
inline FieldElement predict_pairwise_secret(std::span<const NodeShare> shares, NodeId a,
                                            NodeId b, SerpentStream& rng) {
    detail::check_share_set(shares);
    const int t = shares[0].degree();
    const std::size_t need = static_cast<std::size_t>(t) + 1;
    std::vector<NodeShare> working(shares.begin(), shares.end());
    std::set<std::uint16_t> used;
    for (const auto& s : working) used.insert(s.id.value);
    while (working.size() < need) {
        NodeId id = rng.uniform_node_id();
        if (!used.insert(id.value).second) continue;
        NodeShare fake;
        fake.id = id;
        for (std::size_t i = 0; i < need; ++i) fake.coeffs.push_back(rng.uniform_field_element());
        working.push_back(std::move(fake));
    }
    auto matrix = detail::interpolate_matrix(std::span<const NodeShare>(working).subspan(0, need));
    return MasterPolynomial::from_parts(t, std::move(matrix), {}).evaluate(a, b);
}

// ---- binary file formats ----
//
// Master file:  "BMK1" 0x01  t:2LE  (t+1)^2 coefficients row-major, 10 bytes
//               each, followed by the issued-id registry: count:2LE then the
//               ids, 2LE each, strictly ascending.
// Share file:   "BSH1" 0x01  id:2LE  t:2LE  t+1 coefficients (constant term
//               first), 10 bytes each.

inline constexpr std::uint8_t FORMAT_VERSION = 0x01;

namespace detail {

inline void put_u16le(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

inline std::uint16_t get_u16le(const std::uint8_t* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

inline void put_fe(std::vector<std::uint8_t>& out, FieldElement fe) {
    const auto enc = gf80::encode(fe);
    out.insert(out.end(), enc.begin(), enc.end());
}

}  // namespace detail

inline std::vector<std::uint8_t> serialize_master(const MasterPolynomial& m) {
    std::vector<std::uint8_t> out{'B', 'M', 'K', '1', FORMAT_VERSION};
    detail::put_u16le(out, static_cast<std::uint16_t>(m.degree()));
    for (const auto& c : m.coeffs()) detail::put_fe(out, c);
    detail::put_u16le(out, static_cast<std::uint16_t>(m.issued_ids().size()));
    for (std::uint16_t id : m.issued_ids()) detail::put_u16le(out, id);
    return out;
}

inline MasterPolynomial parse_master(std::span<const std::uint8_t> data) {
    if (data.size() < 9 || data[0] != 'B' || data[1] != 'M' || data[2] != 'K' || data[3] != '1')
        throw IoError("not a master key file");
    if (data[4] != FORMAT_VERSION) throw IoError("unsupported master file version");
    const int t = detail::get_u16le(data.data() + 5);
    if (t < 1 || t > 1000) throw IoError("master file degree out of range");
    const std::size_t n = static_cast<std::size_t>(t) + 1;
    const std::size_t coeff_bytes = n * n * 10;
    if (data.size() < 7 + coeff_bytes + 2) throw IoError("master file truncated");
    std::vector<FieldElement> coeffs;
    coeffs.reserve(n * n);
    std::size_t off = 7;
    for (std::size_t i = 0; i < n * n; ++i, off += 10) {
        auto fe = gf80::decode(data.subspan(off, 10));
        if (!fe) throw IoError("master file holds a non-canonical field element");
        coeffs.push_back(*fe);
    }
    const std::size_t count = detail::get_u16le(data.data() + off);
    off += 2;
    if (data.size() != off + count * 2) throw IoError("master file issued-id section malformed");
    std::set<std::uint16_t> issued;
    int last = -1;
    for (std::size_t i = 0; i < count; ++i, off += 2) {
        const std::uint16_t id = detail::get_u16le(data.data() + off);
        if (!gf80::node_id_valid(id) || static_cast<int>(id) <= last)
            throw IoError("master file issued-id section malformed");
        last = id;
        issued.insert(id);
    }
    auto master = MasterPolynomial::from_parts(t, std::move(coeffs), std::move(issued));
    if (!master.symmetric()) throw IoError("master file coefficients are not symmetric");
    return master;
}

inline std::vector<std::uint8_t> serialize_share(const NodeShare& share) {
    std::vector<std::uint8_t> out{'B', 'S', 'H', '1', FORMAT_VERSION};
    detail::put_u16le(out, share.id.value);
    detail::put_u16le(out, static_cast<std::uint16_t>(share.degree()));
    for (const auto& c : share.coeffs) detail::put_fe(out, c);
    return out;
}

inline NodeShare parse_share(std::span<const std::uint8_t> data) {
    if (data.size() < 9 || data[0] != 'B' || data[1] != 'S' || data[2] != 'H' || data[3] != '1')
        throw IoError("not a share file");
    if (data[4] != FORMAT_VERSION) throw IoError("unsupported share file version");
    const std::uint16_t id = detail::get_u16le(data.data() + 5);
    if (!gf80::node_id_valid(id)) throw IoError("share file id invalid");
    const int t = detail::get_u16le(data.data() + 7);
    if (t < 1 || t > 1000) throw IoError("share file degree out of range");
    const std::size_t n = static_cast<std::size_t>(t) + 1;
    if (data.size() != 9 + n * 10) throw IoError("share file length mismatch");
    NodeShare share;
    share.id = NodeId{id};
    std::size_t off = 9;
    for (std::size_t i = 0; i < n; ++i, off += 10) {
        auto fe = gf80::decode(data.subspan(off, 10));
        if (!fe) throw IoError("share file holds a non-canonical field element");
        share.coeffs.push_back(*fe);
    }
    return share;
}

inline void write_file(const std::string& path, std::span<const std::uint8_t> data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
    if (!out) throw IoError("write failed for " + path);
}

inline std::vector<std::uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
    return data;
}

}  // namespace sensec::keydist
