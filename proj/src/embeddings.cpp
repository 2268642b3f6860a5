#include "hybrid/embeddings.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <nlohmann/json.hpp>
#include <unordered_set>

#include "binary_io.hpp"
#include "file_util.hpp"
#include "hybrid/error.hpp"

namespace hybrid {

namespace {

using nlohmann::json;

constexpr std::string_view kMatrixMagic = "FBVX";
constexpr std::uint32_t kMatrixVersion = 1;
constexpr std::size_t kMatrixHeaderBytes = 16;

bool has_matrix_magic(const std::filesystem::path& path)
{
    auto in = detail::open_input(path, std::ios::binary);
    char magic[4] = {};
    in.read(magic, sizeof(magic));
    return in.gcount() == 4 && std::string_view(magic, 4) == kMatrixMagic;
}

struct JsonLine {
    std::size_t line_no;
    std::string id;
    json object;
};

// Calls `visit` for every non-blank line with its parsed object and id.
template <typename Visit>
void for_each_json_line(const std::filesystem::path& path, std::string_view field, Visit visit)
{
    auto in = detail::open_input(path);
    const auto source = path.string();
    std::unordered_set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::is_blank(line)) {
            continue;
        }
        json object;
        try {
            object = json::parse(line);
        } catch (const json::exception& e) {
            throw ParseError(detail::location(source, line_no) + ": malformed JSON: " + e.what());
        }
        if (!object.is_object() || !object.contains("id") || !object["id"].is_string()
            || !object.contains(field)) {
            throw ParseError(detail::location(source, line_no) + ": expected an object with string \"id\" and \""
                             + std::string(field) + "\"");
        }
        auto id = object["id"].get<std::string>();
        if (!seen.insert(id).second) {
            throw ValidationError(detail::location(source, line_no) + ": duplicate id '" + id + "'");
        }
        visit(JsonLine{line_no, std::move(id), std::move(object[std::string(field)])});
    }
}

std::vector<double> parse_vector(const json& value, const std::string& where)
{
    if (!value.is_array() || value.empty()) {
        throw ParseError(where + ": expected a non-empty array of numbers");
    }
    std::vector<double> values;
    values.reserve(value.size());
    for (const auto& element : value) {
        if (!element.is_number()) {
            throw ParseError(where + ": vector element is not a number");
        }
        const double x = element.get<double>();
        if (!std::isfinite(x)) {
            throw ValidationError(where + ": non-finite vector element");
        }
        values.push_back(x);
    }
    return values;
}

void check_finite(std::span<const double> values, const std::string& where)
{
    if (!std::all_of(values.begin(), values.end(), [](double x) { return std::isfinite(x); })) {
        throw ValidationError(where + ": NaN or infinite value");
    }
}

struct RawMatrix {
    std::vector<std::string> row_ids;
    std::size_t dim = 0;
    std::vector<double> values;
};

RawMatrix read_fbvx(const std::filesystem::path& path)
{
    const auto source = path.string();
    const auto file_size = std::filesystem::file_size(path);
    auto in = detail::open_input(path, std::ios::binary);
    detail::BinaryReader reader(in, source);
    reader.expect_magic(kMatrixMagic);
    if (auto version = reader.fixed<std::uint32_t>(); version != kMatrixVersion) {
        throw ParseError(source + ": unsupported FBVX version " + std::to_string(version));
    }
    const auto dim = reader.fixed<std::uint32_t>();
    reader.fixed<std::uint32_t>();  // reserved
    if (dim == 0) {
        throw ParseError(source + ": dimension must be positive");
    }
    const auto payload = file_size - kMatrixHeaderBytes;
    const std::size_t row_bytes = sizeof(float) * dim;
    if (payload % row_bytes != 0) {
        throw ParseError(source + ": payload of " + std::to_string(payload)
                         + " bytes is not a whole number of " + std::to_string(dim) + "-dim rows");
    }
    const std::size_t rows = payload / row_bytes;

    RawMatrix matrix;
    matrix.dim = dim;
    std::vector<float> buffer(rows * dim);
    if (!buffer.empty()) {
        reader.bytes(buffer.data(), buffer.size() * sizeof(float));
    }
    matrix.values.assign(buffer.begin(), buffer.end());

    auto ids_in = detail::open_input(ids_path(path));
    std::string line;
    while (std::getline(ids_in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        matrix.row_ids.push_back(line);
    }
    if (matrix.row_ids.size() != rows) {
        throw ValidationError(source + ": " + std::to_string(rows) + " rows but "
                              + std::to_string(matrix.row_ids.size()) + " ids in "
                              + ids_path(path).string());
    }
    for (std::size_t r = 0; r < rows; ++r) {
        check_finite(std::span<const double>(matrix.values).subspan(r * dim, dim),
                     source + ": row of '" + matrix.row_ids[r] + "'");
    }
    return matrix;
}

void write_fbvx_rows(const std::filesystem::path& path, std::size_t dim,
                     std::span<const double> values, std::span<const std::string> row_ids)
{
    if (dim == 0 || dim > std::numeric_limits<std::uint32_t>::max()) {
        throw ValidationError("FBVX dimension out of range");
    }
    {
        auto out = detail::open_output(path, std::ios::binary);
        detail::BinaryWriter writer(out);
        writer.bytes(kMatrixMagic.data(), kMatrixMagic.size());
        writer.fixed<std::uint32_t>(kMatrixVersion);
        writer.fixed<std::uint32_t>(static_cast<std::uint32_t>(dim));
        writer.fixed<std::uint32_t>(0);
        std::vector<float> narrowed(values.begin(), values.end());
        if (!narrowed.empty()) {
            writer.bytes(narrowed.data(), narrowed.size() * sizeof(float));
        }
    }
    auto ids_out = detail::open_output(ids_path(path));
    for (const auto& id : row_ids) {
        ids_out << id << '\n';
    }
}

}  // namespace

TokenMatrix::TokenMatrix(std::size_t dim, std::vector<double> values)
    : dim_(dim), values_(std::move(values))
{
    if (dim_ == 0 || values_.empty() || values_.size() % dim_ != 0) {
        throw ValidationError("token matrix needs at least one row and a positive dimension");
    }
}

void TokenMatrix::normalize_rows()
{
    for (std::size_t r = 0; r < rows(); ++r) {
        normalize_l2(std::span<double>(values_).subspan(r * dim_, dim_));
    }
}

SparseVector::SparseVector(std::vector<std::pair<std::string, double>> weights)
{
    std::sort(weights.begin(), weights.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 0; i < weights.size(); ++i) {
        const auto& [term, w] = weights[i];
        if (term.empty()) {
            throw ValidationError("sparse vector has an empty term key");
        }
        if (i > 0 && term == weights[i - 1].first) {
            throw ValidationError("sparse vector repeats term '" + term + "'");
        }
        if (!std::isfinite(w) || w < 0.0) {
            throw ValidationError("sparse weight for '" + term + "' must be finite and non-negative");
        }
        if (w > 0.0) {
            entries_.push_back(weights[i]);
        }
    }
}

double SparseVector::weight(const std::string& term) const
{
    auto it = std::lower_bound(entries_.begin(), entries_.end(), term,
                               [](const auto& entry, const std::string& t) { return entry.first < t; });
    return (it != entries_.end() && it->first == term) ? it->second : 0.0;
}

void normalize_l2(std::span<double> values)
{
    double squared = 0.0;
    for (double x : values) {
        squared += x * x;
    }
    const double norm = std::sqrt(squared);
    if (norm == 0.0) {
        throw ValidationError("cannot normalize a zero vector");
    }
    for (double& x : values) {
        x /= norm;
    }
}

std::filesystem::path ids_path(const std::filesystem::path& matrix_path)
{
    auto path = matrix_path;
    path += ".ids";
    return path;
}

DenseRecords read_dense_records(const std::filesystem::path& path)
{
    if (has_matrix_magic(path)) {
        auto raw = read_fbvx(path);
        std::unordered_set<std::string> seen;
        for (const auto& id : raw.row_ids) {
            if (!seen.insert(id).second) {
                throw ValidationError(path.string() + ": duplicate id '" + id + "'");
            }
        }
        if (raw.row_ids.empty()) {
            return DenseRecords{};
        }
        return DenseRecords{std::move(raw.row_ids), TokenMatrix(raw.dim, std::move(raw.values))};
    }

    std::vector<std::string> ids;
    std::vector<double> values;
    std::size_t dim = 0;
    for_each_json_line(path, "vector", [&](JsonLine line) {
        const auto where = detail::location(path.string(), line.line_no) + " (id '" + line.id + "')";
        auto vector = parse_vector(line.object, where);
        if (dim == 0) {
            dim = vector.size();
        } else if (vector.size() != dim) {
            throw ValidationError(where + ": dimension " + std::to_string(vector.size())
                                  + " does not match " + std::to_string(dim));
        }
        values.insert(values.end(), vector.begin(), vector.end());
        ids.push_back(std::move(line.id));
    });
    if (ids.empty()) {
        return DenseRecords{};
    }
    return DenseRecords{std::move(ids), TokenMatrix(dim, std::move(values))};
}

SparseRecords read_sparse_records(const std::filesystem::path& path)
{
    SparseRecords records;
    for_each_json_line(path, "weights", [&](JsonLine line) {
        const auto where = detail::location(path.string(), line.line_no) + " (id '" + line.id + "')";
        if (!line.object.is_object()) {
            throw ParseError(where + ": \"weights\" must be an object of term -> weight");
        }
        std::vector<std::pair<std::string, double>> weights;
        for (const auto& [term, weight] : line.object.items()) {
            if (!weight.is_number()) {
                throw ParseError(where + ": weight of '" + term + "' is not a number");
            }
            weights.emplace_back(term, weight.get<double>());
        }
        try {
            records.vectors.emplace_back(std::move(weights));
        } catch (const ValidationError& e) {
            throw ValidationError(where + ": " + e.what());
        }
        records.ids.push_back(std::move(line.id));
    });
    return records;
}

MultiVectorRecords read_multivector_records(const std::filesystem::path& path)
{
    MultiVectorRecords records;
    if (has_matrix_magic(path)) {
        auto raw = read_fbvx(path);
        records.dim = raw.dim;
        std::unordered_set<std::string> seen;
        std::size_t start = 0;
        while (start < raw.row_ids.size()) {
            std::size_t stop = start;
            while (stop < raw.row_ids.size() && raw.row_ids[stop] == raw.row_ids[start]) {
                ++stop;
            }
            if (!seen.insert(raw.row_ids[start]).second) {
                throw ValidationError(path.string() + ": rows of id '" + raw.row_ids[start]
                                      + "' are not contiguous");
            }
            std::vector<double> values(raw.values.begin() + static_cast<std::ptrdiff_t>(start * raw.dim),
                                       raw.values.begin() + static_cast<std::ptrdiff_t>(stop * raw.dim));
            records.ids.push_back(raw.row_ids[start]);
            records.matrices.emplace_back(raw.dim, std::move(values));
            start = stop;
        }
        return records;
    }

    for_each_json_line(path, "tokens", [&](JsonLine line) {
        const auto where = detail::location(path.string(), line.line_no) + " (id '" + line.id + "')";
        if (!line.object.is_array() || line.object.empty()) {
            throw ParseError(where + ": \"tokens\" must be a non-empty array of vectors");
        }
        std::vector<double> values;
        for (const auto& token : line.object) {
            auto vector = parse_vector(token, where);
            if (records.dim == 0) {
                records.dim = vector.size();
            } else if (vector.size() != records.dim) {
                throw ValidationError(where + ": token dimension " + std::to_string(vector.size())
                                      + " does not match " + std::to_string(records.dim));
            }
            values.insert(values.end(), vector.begin(), vector.end());
        }
        records.matrices.emplace_back(records.dim, std::move(values));
        records.ids.push_back(std::move(line.id));
    });
    return records;
}

void write_dense_jsonl(const DenseRecords& records, const std::filesystem::path& path)
{
    auto out = detail::open_output(path);
    for (std::size_t i = 0; i < records.ids.size(); ++i) {
        auto row = records.matrix.row(i);
        json object{{"id", records.ids[i]}, {"vector", std::vector<double>(row.begin(), row.end())}};
        out << object.dump() << '\n';
    }
}

void write_sparse_jsonl(const SparseRecords& records, const std::filesystem::path& path)
{
    auto out = detail::open_output(path);
    for (std::size_t i = 0; i < records.ids.size(); ++i) {
        json weights = json::object();
        for (const auto& [term, w] : records.vectors[i].entries()) {
            weights[term] = w;
        }
        json object{{"id", records.ids[i]}, {"weights", std::move(weights)}};
        out << object.dump() << '\n';
    }
}

void write_multivector_jsonl(const MultiVectorRecords& records, const std::filesystem::path& path)
{
    auto out = detail::open_output(path);
    for (std::size_t i = 0; i < records.ids.size(); ++i) {
        json tokens = json::array();
        const auto& matrix = records.matrices[i];
        for (std::size_t r = 0; r < matrix.rows(); ++r) {
            auto row = matrix.row(r);
            tokens.push_back(std::vector<double>(row.begin(), row.end()));
        }
        json object{{"id", records.ids[i]}, {"tokens", std::move(tokens)}};
        out << object.dump() << '\n';
    }
}

void write_fbvx(const DenseRecords& records, const std::filesystem::path& path)
{
    write_fbvx_rows(path, records.matrix.dim(), records.matrix.values(), records.ids);
}

void write_fbvx(const MultiVectorRecords& records, const std::filesystem::path& path)
{
    std::vector<double> values;
    std::vector<std::string> row_ids;
    for (std::size_t i = 0; i < records.ids.size(); ++i) {
        const auto& matrix = records.matrices[i];
        values.insert(values.end(), matrix.values().begin(), matrix.values().end());
        row_ids.insert(row_ids.end(), matrix.rows(), records.ids[i]);
    }
    write_fbvx_rows(path, records.dim, values, row_ids);
}

}  // namespace hybrid
