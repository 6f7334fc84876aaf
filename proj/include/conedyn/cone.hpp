#pragma once

#include "conedyn/point.hpp"
#include "conedyn/scalar.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace conedyn {

using RationalMatrix = std::vector<std::vector<Rational>>;

// A polyhedral cone K = {x : psi_i(x) >= 0 for all i} ∩ span(K), stored as
// its facet functionals (rows of `facets`) and an optional spanning set of
// span(K). Without a span basis, span(K) is the whole ambient space.
class ConeSpec {
public:
    static ConeSpec standard(std::size_t n);
    static ConeSpec from_facets(RationalMatrix facets,
                                std::optional<RationalMatrix> span_basis = std::nullopt);

    std::size_t ambient_dim() const noexcept { return ambient_dim_; }
    std::size_t facet_count() const noexcept { return facets_.size(); }
    const RationalMatrix& facets() const noexcept { return facets_; }
    const std::optional<RationalMatrix>& span_basis() const noexcept { return span_basis_; }
    bool is_standard() const noexcept { return standard_; }

    // psi_i(x), zero-based facet index.
    template <class T>
    T facet_value(std::size_t i, const Point<T>& x) const;

    template <class T>
    bool in_span(const Point<T>& x) const;

    // Pairs of facet rows (zero-based) where one is a positive multiple of the other.
    std::vector<std::pair<std::size_t, std::size_t>> redundant_facet_pairs() const;

private:
    ConeSpec() = default;

    std::size_t ambient_dim_ = 0;
    RationalMatrix facets_;
    std::vector<std::vector<double>> facets_f_;
    std::optional<RationalMatrix> span_basis_;
    RationalMatrix span_rref_;  // reduced row echelon form of span_basis_
    std::vector<std::size_t> span_pivots_;
    bool standard_ = false;
};

// Index set I_x = {i : psi_i(x) > 0} identifying the part of x.
class PartIndex {
public:
    PartIndex() = default;
    explicit PartIndex(std::size_t facet_count);

    // One-based facet indices, matching the usual I_x notation.
    static PartIndex from_indices(std::size_t facet_count, const std::vector<std::size_t>& one_based);

    std::size_t facet_count() const noexcept { return n_; }
    bool test(std::size_t zero_based) const;
    void set(std::size_t zero_based);
    std::size_t size() const;
    bool empty() const { return size() == 0; }
    bool is_subset_of(const PartIndex& other) const;
    std::vector<std::size_t> indices() const;  // one-based, ascending
    std::string to_string() const;             // "{1,3}"
    std::size_t hash() const noexcept;

    friend bool operator==(const PartIndex& a, const PartIndex& b)
    {
        return a.n_ == b.n_ && a.words_ == b.words_;
    }

private:
    std::size_t n_ = 0;
    std::vector<std::uint64_t> words_;
};

struct PartIndexHash {
    std::size_t operator()(const PartIndex& p) const noexcept { return p.hash(); }
};

template <class T>
bool contains(const ConeSpec& cone, const Point<T>& x);

// x <=_K y, i.e. y - x in K.
template <class T>
bool leq(const ConeSpec& cone, const Point<T>& x, const Point<T>& y);

// M(y/x) = inf{beta > 0 : y <= beta x}, via the facet embedding.
template <class T>
ExtendedValue<T> m_ratio(const ConeSpec& cone, const Point<T>& y, const Point<T>& x);

// max{M(y/x), M(x/y)}; exp of the part metric, kept exact in rational mode.
template <class T>
ExtendedValue<T> thompson_ratio(const ConeSpec& cone, const Point<T>& x, const Point<T>& y);

// Thompson's part metric; +inf when x and y lie in different parts.
template <class T>
double thompson(const ConeSpec& cone, const Point<T>& x, const Point<T>& y);

template <class T>
PartIndex part_index(const ConeSpec& cone, const Point<T>& x);

// x dominates y iff I_y ⊆ I_x.
template <class T>
bool dominates(const ConeSpec& cone, const Point<T>& x, const Point<T>& y);

// Psi(x) = (psi_1(x), ..., psi_N(x)).
template <class T>
Point<T> psi_embed(const ConeSpec& cone, const Point<T>& x);

// L(x) = (log x_1, ..., log x_n) and its inverse E. Float mode only.
template <class T>
Point<T> log_map(const Point<T>& x);
template <class T>
Point<T> exp_map(const Point<T>& u);

// t(u) = max_i u_i.
template <class T>
T t_fn(const Point<T>& u);

template <class T>
T sup_norm(const Point<T>& u);

// Cone text format:
//   cone ambient=<d> facets=<N>
//   <N rows of d rationals>
//   [span [rows=<k>]
//    <basis rows>]
// or the shorthand `cone standard <n>`.
ConeSpec parse_cone(std::string_view text);
ConeSpec load_cone(const std::string& path_or_shorthand);
std::string format_cone(const ConeSpec& cone);

} // namespace conedyn
