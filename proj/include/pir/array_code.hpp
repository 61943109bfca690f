#pragma once

#include <algorithm>
#include <fstream>
#include <istream>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "pir/errors.hpp"
#include "pir/gf2.hpp"
#include "pir/rational.hpp"

namespace pir {

/// A [t x m, p] array code: m servers (columns) of t cells each, where every
/// cell stores a GF(2) linear combination of the p database parts.
///
/// Parts are 0-indexed in memory; serialized documents and display use
/// 1-based indices (x_1 .. x_p).
class PirArrayCode {
public:
    PirArrayCode(int p, int t, std::vector<std::vector<BitVec>> columns)
        : p_(p), t_(t), columns_(std::move(columns)) {
        if (p_ < 1) throw DimensionError("part count must be positive");
        if (t_ < 1) throw DimensionError("cells per server must be positive");
        for (const auto& col : columns_) {
            if (static_cast<int>(col.size()) != t_)
                throw DimensionError("column with " + std::to_string(col.size()) +
                                     " cells in a t=" + std::to_string(t_) + " code");
            for (const BitVec& cell : col)
                if (cell.width() != p_)
                    throw DimensionError("cell width " + std::to_string(cell.width()) +
                                         " in a p=" + std::to_string(p_) + " code");
        }
    }

    int p() const { return p_; }
    int t() const { return t_; }
    int m() const { return static_cast<int>(columns_.size()); }

    const BitVec& cell(int row, int col) const {
        check_col(col);
        if (row < 0 || row >= t_)
            throw IndexError("row " + std::to_string(row) + " out of range");
        return columns_[col][row];
    }

    const std::vector<BitVec>& column(int col) const {
        check_col(col);
        return columns_[col];
    }

    const std::vector<std::vector<BitVec>>& columns() const { return columns_; }

    /// Storage rate p / (t*m): how much raw information each stored bit carries.
    Rational s() const { return Rational(p_, t_); }

    bool operator==(const PirArrayCode& other) const {
        return p_ == other.p_ && t_ == other.t_ && columns_ == other.columns_;
    }

    void check_col(int col) const {
        if (col < 0 || col >= m())
            throw IndexError("column " + std::to_string(col) + " out of range [0, " +
                             std::to_string(m()) + ")");
    }

private:
    int p_;
    int t_;
    std::vector<std::vector<BitVec>> columns_;
};

/// Span of all cells stored by the given set of columns.
inline Gf2Basis column_span(const PirArrayCode& code, std::span<const int> cols) {
    Gf2Basis basis(code.p());
    for (int c : cols) {
        code.check_col(c);
        for (const BitVec& cell : code.column(c)) basis.insert(cell);
    }
    return basis;
}

inline Gf2Basis column_span(const PirArrayCode& code, std::initializer_list<int> cols) {
    return column_span(code, std::span<const int>(cols.begin(), cols.size()));
}

/// Rewrites every column as a basis of its own span: first each unit vector
/// e_i the span contains (ascending i), then a completion to a basis in
/// canonical echelon order, then all-zero padding up to t cells.  Column
/// spans (and therefore recovery behaviour) are unchanged.
inline PirArrayCode normalize_singletons(const PirArrayCode& code) {
    std::vector<std::vector<BitVec>> out;
    out.reserve(code.m());
    for (int c = 0; c < code.m(); ++c) {
        Gf2Basis span = column_span(code, {c});
        std::vector<BitVec> cells;
        Gf2Basis acc(code.p());
        for (int i = 0; i < code.p(); ++i)
            if (span.spans_unit(i)) {
                BitVec u = BitVec::unit(code.p(), i);
                acc.insert(u);
                cells.push_back(std::move(u));
            }
        for (const BitVec& row : span.rows())
            if (acc.insert(row)) cells.push_back(row);
        cells.resize(code.t(), BitVec(code.p()));
        out.push_back(std::move(cells));
    }
    return PirArrayCode(code.p(), code.t(), std::move(out));
}

/// alpha_i for each part: the number of columns whose span contains e_i
/// (equivalently, the columns that store x_i as an explicit singleton after
/// normalize_singletons).
inline std::vector<int> singleton_census(const PirArrayCode& code) {
    std::vector<int> alpha(code.p(), 0);
    for (int c = 0; c < code.m(); ++c) {
        Gf2Basis span = column_span(code, {c});
        for (int i = 0; i < code.p(); ++i)
            if (span.spans_unit(i)) ++alpha[i];
    }
    return alpha;
}

/// Code restricted to a subset of its columns (order preserved as given).
inline PirArrayCode restrict_columns(const PirArrayCode& code, std::span<const int> cols) {
    std::vector<std::vector<BitVec>> out;
    out.reserve(cols.size());
    for (int c : cols) {
        code.check_col(c);
        out.push_back(code.column(c));
    }
    return PirArrayCode(code.p(), code.t(), std::move(out));
}

/// Summary statistics used by reports and the CLI.
struct CodeStats {
    Rational s;                       // p / t
    Rational storage_overhead;        // t*m / p
    int m = 0;
    std::vector<int> singleton_counts;

    Rational rate_for_k(int k) const { return Rational(k, m); }
};

inline CodeStats code_stats(const PirArrayCode& code) {
    CodeStats st;
    st.s = code.s();
    st.storage_overhead = Rational(static_cast<long long>(code.t()) * code.m(), code.p());
    st.m = code.m();
    st.singleton_counts = singleton_census(code);
    return st;
}

// --- serialization ---------------------------------------------------------
//
// Document shape:
//   {"p": 12, "t": 7, "m": 4,
//    "columns": [[[1],[2],[4],[5],[7],[8],[10,11,12]], ...]}
// Each column is a list of t cells; each cell is the sorted list of 1-based
// part indices appearing in that linear combination (empty list = zero cell).
// An optional "family" string labels where the code came from.

inline PirArrayCode code_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw ParseError("code document must be a JSON object");
    for (const char* key : {"p", "t", "m", "columns"})
        if (!doc.contains(key)) throw ParseError(std::string("code document missing \"") + key + "\"");
    if (!doc["p"].is_number_integer() || !doc["t"].is_number_integer() ||
        !doc["m"].is_number_integer())
        throw ParseError("p, t, m must be integers");
    int p = doc["p"].get<int>();
    int t = doc["t"].get<int>();
    int m = doc["m"].get<int>();
    if (p < 1 || t < 1 || m < 0) throw ParseError("p, t must be positive and m non-negative");
    const auto& jcols = doc["columns"];
    if (!jcols.is_array() || static_cast<int>(jcols.size()) != m)
        throw DimensionError("\"columns\" must be an array of length m");
    std::vector<std::vector<BitVec>> columns;
    columns.reserve(m);
    for (const auto& jcol : jcols) {
        if (!jcol.is_array() || static_cast<int>(jcol.size()) != t)
            throw DimensionError("every column must list exactly t cells");
        std::vector<BitVec> col;
        col.reserve(t);
        for (const auto& jcell : jcol) {
            if (!jcell.is_array()) throw ParseError("cells must be arrays of part indices");
            BitVec v(p);
            for (const auto& jidx : jcell) {
                if (!jidx.is_number_integer()) throw ParseError("part indices must be integers");
                long long idx = jidx.get<long long>();
                if (idx < 1 || idx > p)
                    throw IndexError("part index " + std::to_string(idx) +
                                     " out of range [1, " + std::to_string(p) + "]");
                if (v.test(static_cast<int>(idx - 1)))
                    throw ParseError("duplicate part index " + std::to_string(idx) + " in cell");
                v.set(static_cast<int>(idx - 1));
            }
            col.push_back(std::move(v));
        }
        columns.push_back(std::move(col));
    }
    return PirArrayCode(p, t, std::move(columns));
}

inline nlohmann::ordered_json code_to_json(const PirArrayCode& code,
                                           const std::string& family = "") {
    nlohmann::ordered_json doc;
    doc["p"] = code.p();
    doc["t"] = code.t();
    doc["m"] = code.m();
    if (!family.empty()) doc["family"] = family;
    auto& jcols = doc["columns"] = nlohmann::ordered_json::array();
    for (int c = 0; c < code.m(); ++c) {
        nlohmann::ordered_json jcol = nlohmann::ordered_json::array();
        for (const BitVec& cell : code.column(c)) {
            nlohmann::ordered_json jcell = nlohmann::ordered_json::array();
            for (int i : cell.ones()) jcell.push_back(i + 1);
            jcol.push_back(std::move(jcell));
        }
        jcols.push_back(std::move(jcol));
    }
    return doc;
}

inline PirArrayCode parse_code(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    return code_from_json(doc);
}

inline PirArrayCode load_code(std::istream& in) {
    return parse_code(std::string(std::istreambuf_iterator<char>(in),
                                  std::istreambuf_iterator<char>()));
}

inline PirArrayCode load_code_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open code file: " + path);
    return load_code(in);
}

inline std::string save_code(const PirArrayCode& code, const std::string& family = "") {
    return code_to_json(code, family).dump(1) + "\n";
}

inline void save_code_file(const PirArrayCode& code, const std::string& path,
                           const std::string& family = "") {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write code file: " + path);
    out << save_code(code, family);
}

/// The running 7x4 example over 12 parts: rate 3/4 with every part
/// recoverable from 3 pairwise disjoint column sets.
inline PirArrayCode paper_example() {
    auto cell = [](std::initializer_list<int> parts) {
        BitVec v(12);
        for (int x : parts) v.set(x - 1);
        return v;
    };
    std::vector<std::vector<BitVec>> cols;
    cols.push_back({cell({1}), cell({2}), cell({4}), cell({5}), cell({7}), cell({8}),
                    cell({10, 11, 12})});
    cols.push_back({cell({2}), cell({3}), cell({5}), cell({6}), cell({7, 8, 9}), cell({10}),
                    cell({11})});
    cols.push_back({cell({3}), cell({1}), cell({4, 5, 6}), cell({8}), cell({9}), cell({11}),
                    cell({12})});
    cols.push_back({cell({1, 2, 3}), cell({6}), cell({4}), cell({9}), cell({7}), cell({12}),
                    cell({10})});
    return PirArrayCode(12, 7, std::move(cols));
}

} // namespace pir
