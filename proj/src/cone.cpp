#include "conedyn/cone.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <sstream>

namespace conedyn {

namespace {

template <class T>
using Traits = ScalarTraits<T>;

// Reduced row echelon form over the rationals; returns pivot columns.
std::vector<std::size_t> rref(RationalMatrix& rows, std::size_t cols)
{
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
        std::size_t sel = r;
        while (sel < rows.size() && sgn(rows[sel][c]) == 0) ++sel;
        if (sel == rows.size()) continue;
        std::swap(rows[r], rows[sel]);
        Rational inv = 1 / rows[r][c];
        for (auto& v : rows[r]) v *= inv;
        for (std::size_t k = 0; k < rows.size(); ++k) {
            if (k == r || sgn(rows[k][c]) == 0) continue;
            Rational factor = rows[k][c];
            for (std::size_t j = 0; j < cols; ++j) rows[k][j] -= factor * rows[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    rows.resize(r);
    return pivots;
}

double log_rational(const Rational& q)
{
    long e_num = 0, e_den = 0;
    double m_num = mpz_get_d_2exp(&e_num, q.get_num_mpz_t());
    double m_den = mpz_get_d_2exp(&e_den, q.get_den_mpz_t());
    return std::log(m_num) - std::log(m_den) + static_cast<double>(e_num - e_den) * std::log(2.0);
}

template <class T>
void require_in_cone(const ConeSpec& cone, const Point<T>& x, const char* what)
{
    if (!contains(cone, x)) throw DomainError(std::string(what) + ": point " + to_string(x) + " is not in the cone");
}

std::string strip_comment(std::string line)
{
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.pop_back();
    std::size_t b = 0;
    while (b < line.size() && std::isspace(static_cast<unsigned char>(line[b]))) ++b;
    return line.substr(b);
}

std::vector<std::string> split_ws(const std::string& line)
{
    std::istringstream in(line);
    std::vector<std::string> out;
    for (std::string tok; in >> tok;) out.push_back(tok);
    return out;
}

std::size_t parse_count(const std::string& token, const std::string& key)
{
    if (token.rfind(key + "=", 0) != 0) throw ContractError("cone file: expected '" + key + "=<int>', got '" + token + "'");
    try {
        return std::stoul(token.substr(key.size() + 1));
    } catch (const std::exception&) {
        throw ContractError("cone file: bad integer in '" + token + "'");
    }
}

} // namespace

// ---------------------------------------------------------------- ConeSpec

ConeSpec ConeSpec::standard(std::size_t n)
{
    if (n == 0) throw ContractError("standard cone needs n >= 1");
    RationalMatrix id(n, std::vector<Rational>(n, Rational(0)));
    for (std::size_t i = 0; i < n; ++i) id[i][i] = 1;
    ConeSpec c = from_facets(std::move(id));
    c.standard_ = true;
    return c;
}

ConeSpec ConeSpec::from_facets(RationalMatrix facets, std::optional<RationalMatrix> span_basis)
{
    if (facets.empty()) throw ContractError("a cone needs at least one facet");
    const std::size_t d = facets.front().size();
    if (d == 0) throw ContractError("ambient dimension must be positive");
    for (std::size_t i = 0; i < facets.size(); ++i) {
        require_same_dim(facets[i].size(), d, "facet row");
        bool nonzero = false;
        for (const auto& v : facets[i]) nonzero = nonzero || sgn(v) != 0;
        if (!nonzero) throw ContractError("facet row " + std::to_string(i + 1) + " is the zero functional");
    }
    ConeSpec c;
    c.ambient_dim_ = d;
    c.facets_ = std::move(facets);
    for (const auto& row : c.facets_) {
        std::vector<double> rf;
        for (const auto& v : row) rf.push_back(v.get_d());
        c.facets_f_.push_back(std::move(rf));
    }
    if (span_basis) {
        for (const auto& row : *span_basis) require_same_dim(row.size(), d, "span basis row");
        c.span_rref_ = *span_basis;
        c.span_pivots_ = rref(c.span_rref_, d);
        if (c.span_rref_.empty()) throw ContractError("span basis is empty or all-zero");
        c.span_basis_ = std::move(span_basis);
    }
    return c;
}

template <class T>
T ConeSpec::facet_value(std::size_t i, const Point<T>& x) const
{
    T s = 0;
    if constexpr (Traits<T>::exact) {
        const auto& row = facets_[i];
        for (std::size_t j = 0; j < ambient_dim_; ++j)
            if (sgn(row[j]) != 0) s += row[j] * x[j];
    } else {
        const auto& row = facets_f_[i];
        for (std::size_t j = 0; j < ambient_dim_; ++j) s += row[j] * x[j];
    }
    return s;
}

template <class T>
bool ConeSpec::in_span(const Point<T>& x) const
{
    require_same_dim(x.dim(), ambient_dim_, "span membership");
    if (!span_basis_) return true;
    if constexpr (Traits<T>::exact) {
        std::vector<Rational> rem(x.begin(), x.end());
        for (std::size_t r = 0; r < span_rref_.size(); ++r) {
            Rational factor = rem[span_pivots_[r]];
            if (sgn(factor) == 0) continue;
            for (std::size_t j = 0; j < ambient_dim_; ++j) rem[j] -= factor * span_rref_[r][j];
        }
        for (const auto& v : rem)
            if (sgn(v) != 0) return false;
        return true;
    } else {
        std::vector<double> rem(x.begin(), x.end());
        double scale = 1.0;
        for (double v : rem) scale = std::max(scale, std::abs(v));
        for (std::size_t r = 0; r < span_rref_.size(); ++r) {
            double factor = rem[span_pivots_[r]];
            for (std::size_t j = 0; j < ambient_dim_; ++j) rem[j] -= factor * span_rref_[r][j].get_d();
        }
        for (double v : rem)
            if (std::abs(v) > kFloatTolerance * scale) return false;
        return true;
    }
}

std::vector<std::pair<std::size_t, std::size_t>> ConeSpec::redundant_facet_pairs() const
{
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t a = 0; a < facets_.size(); ++a) {
        for (std::size_t b = a + 1; b < facets_.size(); ++b) {
            std::optional<Rational> ratio;
            bool proportional = true;
            for (std::size_t j = 0; j < ambient_dim_ && proportional; ++j) {
                const auto &u = facets_[a][j], &v = facets_[b][j];
                if (sgn(u) == 0 || sgn(v) == 0) {
                    proportional = sgn(u) == sgn(v);
                    continue;
                }
                Rational r = v / u;
                if (!ratio) ratio = r;
                proportional = *ratio == r;
            }
            if (proportional && ratio && sgn(*ratio) > 0) out.emplace_back(a, b);
        }
    }
    return out;
}

// ---------------------------------------------------------------- PartIndex

PartIndex::PartIndex(std::size_t facet_count) : n_(facet_count), words_((facet_count + 63) / 64, 0) {}

PartIndex PartIndex::from_indices(std::size_t facet_count, const std::vector<std::size_t>& one_based)
{
    PartIndex p(facet_count);
    for (auto i : one_based) {
        if (i == 0 || i > facet_count) throw ContractError("part index out of range: " + std::to_string(i));
        p.set(i - 1);
    }
    return p;
}

bool PartIndex::test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1u; }

void PartIndex::set(std::size_t i)
{
    if (i >= n_) throw ContractError("part index out of range");
    words_[i / 64] |= std::uint64_t{1} << (i % 64);
}

std::size_t PartIndex::size() const
{
    std::size_t s = 0;
    for (auto w : words_) s += static_cast<std::size_t>(std::popcount(w));
    return s;
}

bool PartIndex::is_subset_of(const PartIndex& other) const
{
    require_same_dim(n_, other.n_, "part subset test");
    for (std::size_t k = 0; k < words_.size(); ++k)
        if (words_[k] & ~other.words_[k]) return false;
    return true;
}

std::vector<std::size_t> PartIndex::indices() const
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n_; ++i)
        if (test(i)) out.push_back(i + 1);
    return out;
}

std::string PartIndex::to_string() const
{
    std::string s = "{";
    bool first = true;
    for (auto i : indices()) {
        if (!first) s += ",";
        s += std::to_string(i);
        first = false;
    }
    return s + "}";
}

std::size_t PartIndex::hash() const noexcept
{
    std::size_t h = n_;
    for (auto w : words_) h = h * 1000003u ^ std::hash<std::uint64_t>{}(w);
    return h;
}

// ---------------------------------------------------------------- operations

template <class T>
bool contains(const ConeSpec& cone, const Point<T>& x)
{
    require_same_dim(x.dim(), cone.ambient_dim(), "contains");
    for (std::size_t i = 0; i < cone.facet_count(); ++i)
        if (!Traits<T>::is_nonnegative(cone.facet_value(i, x))) return false;
    return cone.in_span(x);
}

template <class T>
bool leq(const ConeSpec& cone, const Point<T>& x, const Point<T>& y)
{
    require_same_dim(x.dim(), y.dim(), "leq");
    return contains(cone, y - x);
}

template <class T>
ExtendedValue<T> m_ratio(const ConeSpec& cone, const Point<T>& y, const Point<T>& x)
{
    require_same_dim(x.dim(), y.dim(), "m_ratio");
    require_in_cone(cone, x, "m_ratio");
    require_in_cone(cone, y, "m_ratio");
    bool any = false;
    T best = 0;
    for (std::size_t i = 0; i < cone.facet_count(); ++i) {
        T px = cone.facet_value(i, x);
        T py = cone.facet_value(i, y);
        if (Traits<T>::is_zero(px)) {
            if (Traits<T>::is_zero(py)) continue;
            return ExtendedValue<T>::infinity();
        }
        T r = py / px;
        if (!any || best < r) best = r;
        any = true;
    }
    if (!any || best < T(0)) best = 0;
    return ExtendedValue<T>::finite(best);
}

template <class T>
ExtendedValue<T> thompson_ratio(const ConeSpec& cone, const Point<T>& x, const Point<T>& y)
{
    auto a = m_ratio(cone, y, x);
    auto b = m_ratio(cone, x, y);
    // Only x = y = 0 gives 0 here; its distance is 0, i.e. ratio 1.
    if (!a.infinite && !b.infinite && Traits<T>::is_zero(a.value) && Traits<T>::is_zero(b.value))
        return ExtendedValue<T>::finite(T(1));
    return a < b ? b : a;
}

template <class T>
double thompson(const ConeSpec& cone, const Point<T>& x, const Point<T>& y)
{
    if (is_zero_point(psi_embed(cone, x)) && is_zero_point(psi_embed(cone, y))) {
        require_in_cone(cone, x, "thompson");
        require_in_cone(cone, y, "thompson");
        return 0.0;
    }
    auto r = thompson_ratio(cone, x, y);
    if (r.infinite) return HUGE_VAL;
    if constexpr (Traits<T>::exact)
        return log_rational(r.value);
    else
        return std::log(r.value);
}

template <class T>
PartIndex part_index(const ConeSpec& cone, const Point<T>& x)
{
    require_in_cone(cone, x, "part_index");
    PartIndex p(cone.facet_count());
    for (std::size_t i = 0; i < cone.facet_count(); ++i)
        if (Traits<T>::is_positive(cone.facet_value(i, x))) p.set(i);
    return p;
}

template <class T>
bool dominates(const ConeSpec& cone, const Point<T>& x, const Point<T>& y)
{
    return part_index(cone, y).is_subset_of(part_index(cone, x));
}

template <class T>
Point<T> psi_embed(const ConeSpec& cone, const Point<T>& x)
{
    require_same_dim(x.dim(), cone.ambient_dim(), "psi_embed");
    Point<T> out(cone.facet_count());
    for (std::size_t i = 0; i < cone.facet_count(); ++i) out[i] = cone.facet_value(i, x);
    return out;
}

template <class T>
Point<T> log_map(const Point<T>& x)
{
    if constexpr (Traits<T>::exact) {
        throw UnsupportedModeError("log_map is only available in float mode");
    } else {
        Point<T> u(x.dim());
        for (std::size_t i = 0; i < x.dim(); ++i) {
            if (!(x[i] > 0)) throw DomainError("log_map: coordinate " + std::to_string(i + 1) + " is not positive");
            u[i] = std::log(x[i]);
        }
        return u;
    }
}

template <class T>
Point<T> exp_map(const Point<T>& u)
{
    if constexpr (Traits<T>::exact) {
        throw UnsupportedModeError("exp_map is only available in float mode");
    } else {
        Point<T> x(u.dim());
        for (std::size_t i = 0; i < u.dim(); ++i) x[i] = std::exp(u[i]);
        return x;
    }
}

template <class T>
T t_fn(const Point<T>& u)
{
    if (u.empty()) throw ContractError("t_fn of an empty vector");
    T best = u[0];
    for (std::size_t i = 1; i < u.dim(); ++i)
        if (best < u[i]) best = u[i];
    return best;
}

template <class T>
T sup_norm(const Point<T>& u)
{
    Point<T> neg(u.dim());
    for (std::size_t i = 0; i < u.dim(); ++i) neg[i] = -u[i];
    T a = t_fn(u), b = t_fn(neg);
    return a < b ? b : a;
}

#define CONEDYN_INSTANTIATE(T)                                                              \
    template T ConeSpec::facet_value<T>(std::size_t, const Point<T>&) const;              \
    template bool ConeSpec::in_span<T>(const Point<T>&) const;                            \
    template bool contains<T>(const ConeSpec&, const Point<T>&);                          \
    template bool leq<T>(const ConeSpec&, const Point<T>&, const Point<T>&);              \
    template ExtendedValue<T> m_ratio<T>(const ConeSpec&, const Point<T>&, const Point<T>&); \
    template ExtendedValue<T> thompson_ratio<T>(const ConeSpec&, const Point<T>&, const Point<T>&); \
    template double thompson<T>(const ConeSpec&, const Point<T>&, const Point<T>&);       \
    template PartIndex part_index<T>(const ConeSpec&, const Point<T>&);                   \
    template bool dominates<T>(const ConeSpec&, const Point<T>&, const Point<T>&);        \
    template Point<T> psi_embed<T>(const ConeSpec&, const Point<T>&);                     \
    template Point<T> log_map<T>(const Point<T>&);                                        \
    template Point<T> exp_map<T>(const Point<T>&);                                        \
    template T t_fn<T>(const Point<T>&);                                                  \
    template T sup_norm<T>(const Point<T>&);

CONEDYN_INSTANTIATE(Rational)
CONEDYN_INSTANTIATE(double)
#undef CONEDYN_INSTANTIATE

// ---------------------------------------------------------------- cone files

ConeSpec parse_cone(std::string_view text)
{
    std::istringstream in{std::string(text)};
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);) {
        line = strip_comment(line);
        if (!line.empty()) lines.push_back(line);
    }
    if (lines.empty()) throw ContractError("cone file: empty input");
    auto header = split_ws(lines[0]);
    if (header.size() < 2 || header[0] != "cone") throw ContractError("cone file: header must start with 'cone'");
    if (header[1] == "standard") {
        if (header.size() != 3) throw ContractError("cone file: expected 'cone standard <n>'");
        return ConeSpec::standard(std::stoul(header[2]));
    }
    if (header.size() != 3) throw ContractError("cone file: expected 'cone ambient=<d> facets=<N>'");
    const std::size_t d = parse_count(header[1], "ambient");
    const std::size_t n = parse_count(header[2], "facets");

    auto read_row = [&](std::size_t idx) {
        auto toks = split_ws(lines[idx]);
        if (toks.size() != d)
            throw ContractError("cone file: row " + std::to_string(idx + 1) + " has " + std::to_string(toks.size()) +
                                " entries, expected " + std::to_string(d));
        std::vector<Rational> row;
        for (const auto& t : toks) row.push_back(parse_rational(t));
        return row;
    };

    if (lines.size() < 1 + n) throw ContractError("cone file: expected " + std::to_string(n) + " facet rows");
    RationalMatrix facets;
    for (std::size_t i = 0; i < n; ++i) facets.push_back(read_row(1 + i));

    std::optional<RationalMatrix> span;
    std::size_t pos = 1 + n;
    if (pos < lines.size()) {
        auto toks = split_ws(lines[pos]);
        if (toks.empty() || toks[0] != "span") throw ContractError("cone file: unexpected line '" + lines[pos] + "'");
        std::size_t rows = lines.size() - pos - 1;
        if (toks.size() == 2) rows = parse_count(toks[1], "rows");
        if (pos + 1 + rows != lines.size()) throw ContractError("cone file: span block row count mismatch");
        span.emplace();
        for (std::size_t r = 0; r < rows; ++r) span->push_back(read_row(pos + 1 + r));
    }
    return ConeSpec::from_facets(std::move(facets), std::move(span));
}

ConeSpec load_cone(const std::string& spec)
{
    if (spec.rfind("standard:", 0) == 0) return ConeSpec::standard(std::stoul(spec.substr(9)));
    std::ifstream in(spec);
    if (!in) throw ContractError("cannot open cone file '" + spec + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_cone(buf.str());
}

std::string format_cone(const ConeSpec& cone)
{
    std::ostringstream out;
    if (cone.is_standard()) {
        out << "cone standard " << cone.ambient_dim() << "\n";
        return out.str();
    }
    out << "cone ambient=" << cone.ambient_dim() << " facets=" << cone.facet_count() << "\n";
    auto put = [&](const std::vector<Rational>& row) {
        for (std::size_t j = 0; j < row.size(); ++j) out << (j ? " " : "") << row[j].get_str();
        out << "\n";
    };
    for (const auto& row : cone.facets()) put(row);
    if (cone.span_basis()) {
        out << "span rows=" << cone.span_basis()->size() << "\n";
        for (const auto& row : *cone.span_basis()) put(row);
    }
    return out.str();
}

} // namespace conedyn
