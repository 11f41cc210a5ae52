#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ebpois/prior.hpp"

namespace ebpois::io {

using Json = nlohmann::ordered_json;

/// Malformed or unreadable input data.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Reads a counts CSV. Lines starting with '#' and blank lines are skipped.
/// Without a column name: one nonnegative integer per row, optional header
/// "count". With a column name: a header row is required and the named
/// column is read; filter, if set, keeps rows whose filter.first column
/// equals filter.second. Errors name the 1-based line number.
std::vector<std::int64_t> read_counts(std::istream& in, const std::string& column = "",
                                      const std::optional<std::pair<std::string, std::string>>& filter = {});
std::vector<std::int64_t> read_counts_file(const std::string& path, const std::string& column = "",
                                           const std::optional<std::pair<std::string, std::string>>& filter = {});

struct PairedRow {
    std::string player;
    std::int64_t past = 0;
    std::int64_t future = 0;
    std::string position;  ///< empty when the column is absent
};

/// Header player,past,future[,position] required.
std::vector<PairedRow> read_paired(std::istream& in);
std::vector<PairedRow> read_paired_file(const std::string& path);

/// Real-valued column of a CSV with header (e.g. "prediction").
std::vector<double> read_real_column(std::istream& in, const std::string& column);
std::vector<double> read_real_column_file(const std::string& path, const std::string& column);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

std::string sha256_hex(std::string_view bytes);

/// Six decimals, ties to even. Negative zero prints as 0.000000.
std::string fixed6(double v);

struct PriorDocument {
    DiscretePrior prior = DiscretePrior::point_mass(0.0);
    std::string dist;
    double objective = 0.0;
    double min_D = 0.0;
    double max_abs_D_atoms = 0.0;
    Json config = Json::object();
    std::uint64_t seed = 0;
    std::string data_sha256;
};

/// JSON text with a trailing newline. dump(parse(s)) == s for any s produced here.
std::string dump_prior_document(const PriorDocument& doc);
/// Throws DataError on missing fields or an invalid prior.
PriorDocument parse_prior_document(std::string_view text);

/// "count,prediction" rows at fixed six decimals, preceded by comment lines.
std::string predictions_csv(const std::vector<std::int64_t>& counts, const std::vector<double>& predictions,
                            const std::vector<std::string>& comments = {});

}  // namespace ebpois::io
