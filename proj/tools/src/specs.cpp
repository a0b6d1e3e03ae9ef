#include "specs.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>

#include "stabpair/varieties.hpp"

namespace stabpair::cli {

SpecError::SpecError(const std::string& spec, std::size_t column, const std::string& what)
    : std::invalid_argument("malformed spec '" + spec + "' at column " + std::to_string(column) + ": " + what),
      column_(column) {}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

long parse_int(const std::string& spec, std::size_t offset, const std::string& text) {
  long v = 0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (text.empty() || ec != std::errc() || ptr != last) throw SpecError(spec, offset + 1, "expected an integer, got '" + text + "'");
  return v;
}

double parse_double(const std::string& spec, std::size_t offset, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw SpecError(spec, offset + 1, "expected a number, got '" + text + "'");
  }
}

nlohmann::json load_json(const std::string& spec, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError(spec, 1, "cannot open file '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw SpecError(spec, 1, std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace

SparsePolynomial determinant_polynomial(int n) {
  if (n < 1 || n > 7) throw std::invalid_argument("determinant_polynomial: need 1 <= n <= 7");
  const MatrixShape shape{n, n};
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  SparsePolynomial::TermMap terms;
  do {
    Exponent e(static_cast<std::size_t>(n * n), 0);
    int inversions = 0;
    for (int i = 0; i < n; ++i) {
      e[static_cast<std::size_t>(i * n + perm[static_cast<std::size_t>(i)])] = 1;
      for (int j = i + 1; j < n; ++j) inversions += perm[static_cast<std::size_t>(i)] > perm[static_cast<std::size_t>(j)];
    }
    terms.emplace(std::move(e), inversions % 2 ? -1.0 : 1.0);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return SparsePolynomial(shape, n, std::move(terms));
}

Polynomial determinant(int n) {
  if (n < 1) throw std::invalid_argument("determinant: n must be >= 1");
  if (n <= 6) return determinant_polynomial(n);
  return BlackBoxPolynomial({n, n}, n, [](const ComplexMatrix& a) { return a.partialPivLu().determinant(); });
}

Polynomial parse_poly(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string head = colon == std::string::npos ? spec : spec.substr(0, colon);
  const std::string body = colon == std::string::npos ? "" : spec.substr(colon + 1);
  const std::size_t off = colon == std::string::npos ? 0 : colon + 1;
  try {
    if (head == "disc") return rnc_hyperdiscriminant(static_cast<int>(parse_int(spec, off, body)));
    if (head == "res") return rnc_resultant(static_cast<int>(parse_int(spec, off, body)));
    if (head == "det") return determinant(static_cast<int>(parse_int(spec, off, body)));
    if (head == "const") {
      const long cols = parse_int(spec, off, body);
      if (cols < 1) throw SpecError(spec, off + 1, "column count must be positive");
      return SparsePolynomial::constant({1, static_cast<int>(cols)}, 1.0);
    }
    if (head == "monomial") {
      const auto rows = split(body, ';');
      std::vector<std::vector<long>> m;
      std::size_t pos = off;
      for (const auto& r : rows) {
        std::vector<long> row;
        std::size_t p = pos;
        for (const auto& cell : split(r, ',')) {
          const long v = parse_int(spec, p, cell);
          if (v < 0 || v > 65535) throw SpecError(spec, p + 1, "exponent out of range");
          row.push_back(v);
          p += cell.size() + 1;
        }
        if (!m.empty() && row.size() != m.front().size()) throw SpecError(spec, pos + 1, "ragged exponent rows");
        m.push_back(std::move(row));
        pos += r.size() + 1;
      }
      const MatrixShape shape{static_cast<int>(m.size()), static_cast<int>(m.front().size())};
      Exponent e;
      for (const auto& row : m) {
        for (long v : row) e.push_back(static_cast<std::uint16_t>(v));
      }
      return SparsePolynomial::monomial(shape, e);
    }
  } catch (const SpecError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw SpecError(spec, off + 1, e.what());
  }
  // Anything else is a JSON file, optionally with a #key selector.
  const auto hash = spec.find('#');
  const std::string path = spec.substr(0, hash);
  if (path.size() < 5 || path.substr(path.size() - 5) != ".json") {
    throw SpecError(spec, 1, "unknown polynomial kind '" + head + "' (expected disc, res, det, const, monomial or a .json file)");
  }
  auto j = load_json(spec, path);
  if (hash != std::string::npos) {
    const std::string key = spec.substr(hash + 1);
    if (!j.contains(key)) throw SpecError(spec, hash + 2, "no key '" + key + "' in file");
    j = j.at(key);
  }
  try {
    return SparsePolynomial::from_json(j);
  } catch (const std::exception& e) {
    throw SpecError(spec, 1, e.what());
  }
}

PairVector parse_term(const std::string& spec) {
  std::string rest = spec;
  std::size_t off = 0;
  int q = 0;
  if (rest.rfind("I^", 0) == 0) {
    const auto star = rest.find('*');
    if (star == std::string::npos) throw SpecError(spec, 1, "expected I^<q>*<poly>");
    q = static_cast<int>(parse_int(spec, 2, rest.substr(2, star - 2)));
    if (q < 0) throw SpecError(spec, 3, "identity power must be >= 0");
    off = star + 1;
    rest = rest.substr(star + 1);
  }
  int k = 1;
  const auto caret = rest.rfind('^');
  if (caret != std::string::npos && caret + 1 < rest.size() &&
      std::all_of(rest.begin() + static_cast<long>(caret) + 1, rest.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
    k = static_cast<int>(parse_int(spec, off + caret + 1, rest.substr(caret + 1)));
    rest = rest.substr(0, caret);
  }
  Polynomial p = [&]() {
    try {
      return parse_poly(rest);
    } catch (const SpecError& e) {
      throw SpecError(spec, off + e.column(), e.what());
    }
  }();
  return PairVector(std::move(p), k, q);
}

std::optional<int> variety_pair_degree(const std::string& spec) {
  if (spec.rfind("rnc:", 0) != 0) return std::nullopt;
  return static_cast<int>(parse_int(spec, 5, spec.substr(4)));
}

PairSpec parse_pair(const std::string& spec) {
  if (const auto d = variety_pair_degree(spec)) {
    if (*d < 2) throw SpecError(spec, 5, "rnc degree must be at least 2");
    return normalized_pair_spec(rational_normal_curve(*d));
  }
  if (spec.rfind("v=", 0) != 0) throw SpecError(spec, 1, "pair must start with v= or rnc:");
  const auto sep = spec.find(",w=");
  if (sep == std::string::npos) throw SpecError(spec, spec.size() + 1, "missing ,w=<term>");
  auto term = [&](std::size_t start, std::size_t len) {
    try {
      return parse_term(spec.substr(start, len));
    } catch (const SpecError& e) {
      throw SpecError(spec, start + e.column(), e.what());
    }
  };
  PairVector v = term(2, sep - 2);
  PairVector w = term(sep + 3, std::string::npos);
  if (v.ambient() != w.ambient()) throw SpecError(spec, sep + 4, "v and w live on different N+1");
  return PairSpec(std::move(v), std::move(w));
}

GroupElement parse_sigma(const std::string& spec, int ambient) {
  if (spec == "identity") return GroupElement::identity(ambient);
  const auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  const std::string body = colon == std::string::npos ? "" : spec.substr(colon + 1);
  const std::size_t off = colon + 1;
  auto numbers = [&](const std::string& text, std::size_t at) {
    std::vector<double> out;
    for (const auto& cell : split(text, ',')) {
      out.push_back(parse_double(spec, at, cell));
      at += cell.size() + 1;
    }
    return out;
  };
  auto check = [&](std::size_t n) {
    if (static_cast<int>(n) != ambient) {
      throw SpecError(spec, off + 1, "expected " + std::to_string(ambient) + " entries, got " + std::to_string(n));
    }
  };
  try {
    if (head == "diag") {
      const auto t = numbers(body, off);
      check(t.size());
      return GroupElement::diagonal(std::vector<Complex>(t.begin(), t.end()));
    }
    if (head == "ray") {
      const auto at = body.find('@');
      if (at == std::string::npos) throw SpecError(spec, off + body.size() + 1, "expected ray:<e0,...>@<t>");
      std::vector<long> e;
      std::size_t p = off;
      for (const auto& cell : split(body.substr(0, at), ',')) {
        e.push_back(parse_int(spec, p, cell));
        p += cell.size() + 1;
      }
      check(e.size());
      const double t = parse_double(spec, off + at + 1, body.substr(at + 1));
      return OnePSG(std::move(e)).at(t);
    }
    if (head == "matrix") {
      const auto rows = split(body, ';');
      check(rows.size());
      ComplexMatrix m(ambient, ambient);
      std::size_t p = off;
      for (int i = 0; i < ambient; ++i) {
        const auto r = numbers(rows[static_cast<std::size_t>(i)], p);
        check(r.size());
        for (int j = 0; j < ambient; ++j) m(i, j) = r[static_cast<std::size_t>(j)];
        p += rows[static_cast<std::size_t>(i)].size() + 1;
      }
      return GroupElement(m);
    }
  } catch (const SpecError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw SpecError(spec, off + 1, e.what());
  }
  if (spec.size() >= 5 && spec.substr(spec.size() - 5) == ".json") {
    try {
      auto g = GroupElement::from_json(load_json(spec, spec));
      if (g.size() != ambient) throw SpecError(spec, 1, "matrix size does not match the pair");
      return g;
    } catch (const SpecError&) {
      throw;
    } catch (const std::exception& e) {
      throw SpecError(spec, 1, e.what());
    }
  }
  throw SpecError(spec, 1, "unknown sigma kind '" + head + "' (expected identity, diag, ray, matrix or a .json file)");
}

std::pair<int, int> parse_range(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) {
    const int v = static_cast<int>(parse_int(spec, 0, spec));
    return {v, v};
  }
  const int a = static_cast<int>(parse_int(spec, 0, spec.substr(0, colon)));
  const int b = static_cast<int>(parse_int(spec, colon + 1, spec.substr(colon + 1)));
  if (b < a) throw SpecError(spec, colon + 2, "range end precedes start");
  return {a, b};
}

}  // namespace stabpair::cli
