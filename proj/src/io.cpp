#include <ccdr/errors.hpp>
#include <ccdr/io.hpp>

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>
#include <tuple>

namespace ccdr::io {

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line, char sep)
{
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        fields.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return fields;
}

std::optional<double> parse_double(std::string_view s)
{
    if (s.empty())
        return std::nullopt;
    if (s.front() == '+')
        s.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size())
        return std::nullopt;
    return value;
}

std::optional<Index> parse_index(std::string_view s)
{
    Index value = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size())
        return std::nullopt;
    return value;
}

std::ifstream open_input(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open '" + path.string() + "' for reading");
    return in;
}

std::ofstream open_output(const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    return out;
}

} // namespace

std::string format_double(double value)
{
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return buffer;
}

CsvTable read_csv(std::istream& in)
{
    CsvTable table;
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    std::size_t width = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty())
            continue;
        const auto fields = split(line, ',');
        if (width == 0)
            width = fields.size();
        else if (fields.size() != width)
            throw ParseError("line " + std::to_string(line_no) + ": expected " + std::to_string(width) +
                             " fields, found " + std::to_string(fields.size()));

        std::vector<double> row;
        row.reserve(fields.size());
        bool numeric = true;
        for (auto f : fields) {
            auto v = parse_double(f);
            if (!v) {
                numeric = false;
                break;
            }
            row.push_back(*v);
        }
        if (!numeric) {
            if (rows.empty() && table.header.empty()) {
                for (auto f : fields)
                    table.header.emplace_back(f);
                continue;
            }
            throw ParseError("line " + std::to_string(line_no) + ": non-numeric value");
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty())
        throw ParseError("no data rows");

    table.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < width; ++c)
            table.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    return table;
}

CsvTable read_csv(const std::filesystem::path& path)
{
    auto in = open_input(path);
    return read_csv(in);
}

void write_csv(std::ostream& out, const Matrix& values, const std::vector<std::string>& header)
{
    for (Eigen::Index c = 0; c < values.cols(); ++c) {
        if (c > 0)
            out << ',';
        if (header.empty())
            out << 'x' << (c + 1);
        else
            out << header.at(static_cast<std::size_t>(c));
    }
    out << '\n';
    for (Eigen::Index r = 0; r < values.rows(); ++r) {
        for (Eigen::Index c = 0; c < values.cols(); ++c) {
            if (c > 0)
                out << ',';
            out << format_double(values(r, c));
        }
        out << '\n';
    }
}

void write_csv(const std::filesystem::path& path, const Matrix& values,
               const std::vector<std::string>& header)
{
    auto out = open_output(path);
    write_csv(out, values, header);
}

void write_edge_list(std::ostream& out, const SparseAdjacency& edges, std::optional<double> lambda)
{
    out << "# p=" << edges.size();
    if (lambda)
        out << " lambda=" << format_double(*lambda);
    out << '\n';
    // Row-major (by parent, then child) reads naturally.
    std::vector<std::tuple<Index, Index, double>> lines;
    edges.for_each_edge([&](Index i, Index j, double w) { lines.emplace_back(i, j, w); });
    std::sort(lines.begin(), lines.end());
    for (const auto& [i, j, w] : lines)
        out << (i + 1) << ' ' << (j + 1) << ' ' << format_double(w) << '\n';
}

void write_edge_list(const std::filesystem::path& path, const SparseAdjacency& edges,
                     std::optional<double> lambda)
{
    auto out = open_output(path);
    write_edge_list(out, edges, lambda);
}

EdgeList read_edge_list(std::istream& in)
{
    EdgeList list;
    bool have_p = false;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto text = trim(line);
        if (text.empty())
            continue;
        const auto where = "line " + std::to_string(line_no) + ": ";
        if (text.front() == '#') {
            std::istringstream fields{std::string(text.substr(1))};
            std::string token;
            while (fields >> token) {
                const auto eq = token.find('=');
                if (eq == std::string::npos)
                    continue;
                const auto key = token.substr(0, eq);
                const auto value = std::string_view(token).substr(eq + 1);
                if (key == "p") {
                    auto p = parse_index(value);
                    if (!p)
                        throw ParseError(where + "bad node count");
                    list.p = *p;
                    list.edges = SparseAdjacency(*p);
                    have_p = true;
                } else if (key == "lambda") {
                    auto lambda = parse_double(value);
                    if (!lambda)
                        throw ParseError(where + "bad lambda");
                    list.lambda = *lambda;
                }
            }
            continue;
        }
        if (!have_p)
            throw ParseError(where + "edge before '# p=<p>' header");

        std::istringstream fields{std::string(text)};
        std::string a, b, c, extra;
        fields >> a >> b >> c;
        if (fields >> extra)
            throw ParseError(where + "too many fields");
        auto from = parse_index(a);
        if (b == "--") {
            auto to = parse_index(c);
            if (!from || !to || *from < 1 || *to < 1 || *from > list.p || *to > list.p || *from == *to)
                throw ParseError(where + "bad undirected edge");
            list.undirected.emplace_back(*from - 1, *to - 1);
            continue;
        }
        auto to = parse_index(b);
        auto w = c.empty() ? std::optional<double>(1.0) : parse_double(c);
        if (!from || !to || !w || *from < 1 || *to < 1 || *from > list.p || *to > list.p ||
            *from == *to)
            throw ParseError(where + "expected 'parent child weight' with 1-based indices");
        if (*w != 0.0)
            list.edges.set(*from - 1, *to - 1, *w);
    }
    if (!have_p)
        throw ParseError("missing '# p=<p>' header");
    return list;
}

EdgeList read_edge_list(const std::filesystem::path& path)
{
    auto in = open_input(path);
    return read_edge_list(in);
}

WeightedDag to_weighted_dag(const EdgeList& list)
{
    return WeightedDag(list.edges, Vector::Ones(static_cast<Eigen::Index>(list.p)));
}

std::string fingerprint(const Matrix& values)
{
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256 unavailable");
    const std::int64_t dims[2] = {values.rows(), values.cols()};
    EVP_DigestUpdate(ctx.get(), dims, sizeof dims);
    // Column-major storage; hash in that order.
    EVP_DigestUpdate(ctx.get(), values.data(), sizeof(double) * static_cast<std::size_t>(values.size()));
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx.get(), digest, &len);
    std::ostringstream hex;
    for (unsigned int i = 0; i < len; ++i)
        hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
    return hex.str();
}

} // namespace ccdr::io
