#pragma once

#include <ccdr/model.hpp>

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ccdr::io {

/// Malformed CSV or edge-list input.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CsvTable {
    std::vector<std::string> header;  ///< empty when the file has no header
    Matrix values;
};

/// Rows are observations, columns variables. A first row that does not
/// parse as numbers is taken as the header. Blank lines are skipped.
CsvTable read_csv(std::istream& in);
CsvTable read_csv(const std::filesystem::path& path);

/// Writes with a header x1..xp (or `header` when given), 17 significant digits.
void write_csv(std::ostream& out, const Matrix& values, const std::vector<std::string>& header = {});
void write_csv(const std::filesystem::path& path, const Matrix& values,
               const std::vector<std::string>& header = {});

struct EdgeList {
    Index p = 0;
    std::optional<double> lambda;
    SparseAdjacency edges;
    /// "i -- j" lines: undirected edges (0-based), as emitted by CPDAG learners.
    std::vector<std::pair<Index, Index>> undirected;
};

/// Header "# p=<p> lambda=<lambda>" (lambda omitted when unset), then one
/// "parent child weight" line per edge, 1-based, weight with 17 significant digits.
void write_edge_list(std::ostream& out, const SparseAdjacency& edges, std::optional<double> lambda);
void write_edge_list(const std::filesystem::path& path, const SparseAdjacency& edges,
                     std::optional<double> lambda);

EdgeList read_edge_list(std::istream& in);
EdgeList read_edge_list(const std::filesystem::path& path);

/// DAG with the listed weights and unit noise variances.
WeightedDag to_weighted_dag(const EdgeList& list);

/// Hex SHA-256 of the matrix dimensions and values.
std::string fingerprint(const Matrix& values);

/// Formats a double with 17 significant digits.
std::string format_double(double value);

} // namespace ccdr::io
