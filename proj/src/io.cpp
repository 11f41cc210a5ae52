#include "ebpois/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

namespace ebpois::io {

namespace {

std::string trim(std::string_view s) {
    std::size_t a = 0, b = s.size();
    while (a < b && (s[a] == ' ' || s[a] == '\t' || s[a] == '\r')) ++a;
    while (b > a && (s[b - 1] == ' ' || s[b - 1] == '\t' || s[b - 1] == '\r')) --b;
    return std::string(s.substr(a, b - a));
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        out.push_back(trim(std::string_view(line).substr(start, comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

struct Line {
    std::size_t number;
    std::vector<std::string> fields;
};

std::vector<Line> read_rows(std::istream& in) {
    std::vector<Line> rows;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (number == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
        const auto t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        rows.push_back({number, split(t)});
    }
    if (in.bad()) throw DataError("read error");
    return rows;
}

bool parse_int(const std::string& s, std::int64_t& v) {
    if (s.empty()) return false;
    const char* end = s.data() + s.size();
    const char* begin = s.data() + (s[0] == '+' ? 1 : 0);
    auto [ptr, ec] = std::from_chars(begin, end, v);
    return ec == std::errc() && ptr == end;
}

std::int64_t parse_count(const std::string& s, std::size_t line) {
    std::int64_t v = 0;
    if (!parse_int(s, v)) throw DataError("line " + std::to_string(line) + ": not an integer count: '" + s + "'");
    if (v < 0) throw DataError("line " + std::to_string(line) + ": negative count " + s);
    return v;
}

std::size_t column_index(const Line& header, const std::string& name) {
    const auto it = std::find(header.fields.begin(), header.fields.end(), name);
    if (it == header.fields.end())
        throw DataError("line " + std::to_string(header.number) + ": no column named '" + name + "'");
    return static_cast<std::size_t>(it - header.fields.begin());
}

const std::string& field(const Line& row, std::size_t idx, std::size_t width) {
    if (row.fields.size() != width)
        throw DataError("line " + std::to_string(row.number) + ": expected " + std::to_string(width) + " fields, got " +
                        std::to_string(row.fields.size()));
    return row.fields[idx];
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "'");
    return in;
}

}  // namespace

std::vector<std::int64_t> read_counts(std::istream& in, const std::string& column,
                                      const std::optional<std::pair<std::string, std::string>>& filter) {
    const auto rows = read_rows(in);
    std::vector<std::int64_t> out;
    if (column.empty()) {
        if (filter) throw DataError("a row filter needs a named column");
        std::size_t first = 0;
        if (!rows.empty() && rows[0].fields.size() == 1 && rows[0].fields[0] == "count") first = 1;
        for (std::size_t r = first; r < rows.size(); ++r) out.push_back(parse_count(field(rows[r], 0, 1), rows[r].number));
    } else {
        if (rows.empty()) throw DataError("missing header row");
        const auto& header = rows[0];
        const auto width = header.fields.size();
        const auto idx = column_index(header, column);
        std::optional<std::size_t> fidx;
        if (filter) fidx = column_index(header, filter->first);
        for (std::size_t r = 1; r < rows.size(); ++r) {
            const auto& v = field(rows[r], idx, width);
            if (fidx && rows[r].fields[*fidx] != filter->second) continue;
            out.push_back(parse_count(v, rows[r].number));
        }
    }
    if (out.empty()) throw DataError("no counts found");
    return out;
}

std::vector<std::int64_t> read_counts_file(const std::string& path, const std::string& column,
                                           const std::optional<std::pair<std::string, std::string>>& filter) {
    auto in = open_input(path);
    try {
        return read_counts(in, column, filter);
    } catch (const DataError& e) {
        throw DataError(path + ": " + e.what());
    }
}

std::vector<PairedRow> read_paired(std::istream& in) {
    const auto rows = read_rows(in);
    if (rows.empty()) throw DataError("missing header row");
    const auto& h = rows[0].fields;
    const bool has_pos = h.size() == 4 && h[3] == "position";
    if (h.size() < 3 || h[0] != "player" || h[1] != "past" || h[2] != "future" || (h.size() == 4 && !has_pos) ||
        h.size() > 4)
        throw DataError("line " + std::to_string(rows[0].number) + ": header must be player,past,future[,position]");
    std::vector<PairedRow> out;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        field(row, 0, h.size());
        PairedRow p;
        p.player = row.fields[0];
        p.past = parse_count(row.fields[1], row.number);
        p.future = parse_count(row.fields[2], row.number);
        if (has_pos) p.position = row.fields[3];
        out.push_back(std::move(p));
    }
    if (out.empty()) throw DataError("no rows found");
    return out;
}

std::vector<PairedRow> read_paired_file(const std::string& path) {
    auto in = open_input(path);
    try {
        return read_paired(in);
    } catch (const DataError& e) {
        throw DataError(path + ": " + e.what());
    }
}

std::vector<double> read_real_column(std::istream& in, const std::string& column) {
    const auto rows = read_rows(in);
    if (rows.empty()) throw DataError("missing header row");
    const auto width = rows[0].fields.size();
    const auto idx = column_index(rows[0], column);
    std::vector<double> out;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& s = field(rows[r], idx, width);
        double v = 0.0;
        const char* end = s.data() + s.size();
        auto [ptr, ec] = std::from_chars(s.data(), end, v);
        if (ec != std::errc() || ptr != end || !std::isfinite(v))
            throw DataError("line " + std::to_string(rows[r].number) + ": not a number: '" + s + "'");
        out.push_back(v);
    }
    if (out.empty()) throw DataError("no rows found");
    return out;
}

std::vector<double> read_real_column_file(const std::string& path, const std::string& column) {
    auto in = open_input(path);
    try {
        return read_real_column(in, column);
    } catch (const DataError& e) {
        throw DataError(path + ": " + e.what());
    }
}

std::string read_file(const std::string& path) {
    auto in = open_input(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write '" + path + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw DataError("write failed for '" + path + "'");
}

std::string sha256_hex(std::string_view bytes) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256 failed");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

std::string fixed6(double v) {
    if (!std::isfinite(v)) throw std::domain_error("fixed6: non-finite value");
    std::array<char, 64> buf{};
    // to_chars rounds the exact binary value, so exact ties go to even.
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::fixed, 6);
    if (ec != std::errc()) throw std::runtime_error("fixed6: formatting failed");
    std::string s(buf.data(), ptr);
    if (s == "-0.000000") s = "0.000000";
    return s;
}

std::string dump_prior_document(const PriorDocument& doc) {
    Json j;
    j["atoms"] = doc.prior.atoms();
    j["weights"] = doc.prior.weights();
    j["dist"] = doc.dist;
    j["objective"] = doc.objective;
    j["certificate"] = {{"min_D", doc.min_D}, {"max_abs_D_atoms", doc.max_abs_D_atoms}};
    j["config"] = doc.config;
    j["seed"] = doc.seed;
    j["data_sha256"] = doc.data_sha256;
    return j.dump(2) + "\n";
}

PriorDocument parse_prior_document(std::string_view text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("prior document is not valid JSON: ") + e.what());
    }
    try {
        PriorDocument doc;
        doc.prior = DiscretePrior(j.at("atoms").get<std::vector<double>>(), j.at("weights").get<std::vector<double>>());
        doc.dist = j.at("dist").get<std::string>();
        doc.objective = j.at("objective").get<double>();
        doc.min_D = j.at("certificate").at("min_D").get<double>();
        doc.max_abs_D_atoms = j.at("certificate").at("max_abs_D_atoms").get<double>();
        doc.config = j.at("config");
        doc.seed = j.at("seed").get<std::uint64_t>();
        doc.data_sha256 = j.at("data_sha256").get<std::string>();
        return doc;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("prior document: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw DataError(std::string("prior document: ") + e.what());
    }
}

std::string predictions_csv(const std::vector<std::int64_t>& counts, const std::vector<double>& predictions,
                            const std::vector<std::string>& comments) {
    if (counts.size() != predictions.size()) throw std::invalid_argument("predictions_csv: size mismatch");
    std::string out;
    for (const auto& c : comments) out += "# " + c + "\n";
    out += "count,prediction\n";
    for (std::size_t i = 0; i < counts.size(); ++i) out += std::to_string(counts[i]) + "," + fixed6(predictions[i]) + "\n";
    return out;
}

}  // namespace ebpois::io
