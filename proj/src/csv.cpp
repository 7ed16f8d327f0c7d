#include "vegout/csv.hpp"

#include <cmath>

#include <fmt/format.h>

#include "vegout/common.hpp"

namespace vegout::csv {

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r' || s[b] == '\n')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r' || s[e - 1] == '\n')) --e;
    return std::string(s.substr(b, e - b));
}

}  // namespace

std::vector<std::string> split_line(std::string_view line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    bool was_quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
            was_quoted = true;
        } else if (c == ',') {
            out.push_back(was_quoted ? cur : trim(cur));
            cur.clear();
            was_quoted = false;
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(was_quoted ? cur : trim(cur));
    return out;
}

std::string escape(std::string_view field) {
    const bool needs = field.find_first_of(",\"\n") != std::string_view::npos ||
                       (!field.empty() && (field.front() == ' ' || field.back() == ' '));
    if (!needs) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

Reader::Reader(const std::filesystem::path& path) : path_(path), in_(path) {
    if (!in_) throw DataError(fmt::format("cannot open '{}'", path.string()));
    std::string line;
    if (!std::getline(in_, line)) throw DataError(fmt::format("{}: missing header row", path.string()));
    line_ = 1;
    if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) line.erase(0, 3);  // UTF-8 BOM
    header_ = split_line(line);
}

void Reader::require_header(const std::vector<std::string>& expected) const {
    if (header_ != expected) {
        std::string got;
        for (std::size_t i = 0; i < header_.size(); ++i) got += (i ? "," : "") + header_[i];
        std::string want;
        for (std::size_t i = 0; i < expected.size(); ++i) want += (i ? "," : "") + expected[i];
        throw DataError(fmt::format("{}: malformed header '{}', expected '{}'", path_.string(), got, want));
    }
}

bool Reader::next(std::vector<std::string>& fields) {
    std::string line;
    while (std::getline(in_, line)) {
        ++line_;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        fields = split_line(line);
        return true;
    }
    return false;
}

Writer::Writer(const std::filesystem::path& path, const std::vector<std::string>& header) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    out_.open(path, std::ios::binary | std::ios::trunc);
    if (!out_) throw DataError(fmt::format("cannot write '{}'", path.string()));
    row(header);
}

void Writer::row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out_ << ',';
        out_ << escape(fields[i]);
    }
    out_ << '\n';
}

std::string num(double v, int precision) {
    if (std::isnan(v)) return "nan";
    if (v == 0.0) v = 0.0;  // folds -0
    std::string s = fmt::format("{:.{}f}", v, precision);
    if (s.starts_with("-") && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
    return s;
}

}  // namespace vegout::csv
