#include "tabular/data_table.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "util/error.hpp"
#include "util/stats.hpp"

namespace omicause {

std::string_view family_name(Family f) {
    switch (f) {
        case Family::CopyNumber: return "copy_number";
        case Family::Mutation: return "mutation";
        case Family::GeneExpression: return "gene_expression";
        case Family::ProteinLevel: return "protein_level";
        case Family::Target: return "target";
        case Family::Other: return "other";
    }
    return "other";
}

Family family_from_name(std::string_view name, std::string_view target) {
    if (!target.empty() && name == target) return Family::Target;
    if (name.starts_with("cn_")) return Family::CopyNumber;
    if (name.starts_with("mu_")) return Family::Mutation;
    if (name.starts_with("rs_")) return Family::GeneExpression;
    if (name.starts_with("pp_")) return Family::ProteinLevel;
    return Family::Other;
}

std::string gene_symbol(std::string_view name) {
    for (std::string_view p : {"cn_", "mu_", "rs_", "pp_"})
        if (name.starts_with(p)) return std::string(name.substr(p.size()));
    return std::string(name);
}

DataTable::DataTable(std::vector<Column> columns, std::optional<std::string> target)
    : columns_(std::move(columns)), target_(std::move(target)) {
    n_rows_ = 0;
    if (!columns_.empty()) {
        const auto& c0 = columns_.front();
        n_rows_ = c0.meta.kind.is_categorical() ? c0.codes.size() : c0.values.size();
    }
    std::size_t target_count = 0;
    for (const auto& c : columns_) {
        if (c.meta.family == Family::Target) ++target_count;
        if (c.meta.kind.is_categorical()) {
            if (c.codes.size() != n_rows_ || !c.values.empty())
                throw InvalidArgument("column '" + c.meta.name + "' has inconsistent length");
            const int card = c.meta.kind.cardinality();
            if (static_cast<int>(c.levels.size()) != card)
                throw InvalidArgument("column '" + c.meta.name + "' level count differs from cardinality");
            for (auto code : c.codes)
                if (code < 0 || code >= card)
                    throw InvalidArgument("column '" + c.meta.name + "' has a code outside [0, cardinality)");
        } else {
            if (c.values.size() != n_rows_ || !c.codes.empty())
                throw InvalidArgument("column '" + c.meta.name + "' has inconsistent length");
            for (double v : c.values)
                if (!std::isfinite(v)) throw InvalidArgument("column '" + c.meta.name + "' has a non-finite value");
        }
    }
    if (target_) {
        if (!find(*target_)) throw InvalidArgument("target column '" + *target_ + "' not in table");
        if (target_count != 1) throw InvalidArgument("target family must occur exactly once");
    } else if (target_count != 0) {
        throw InvalidArgument("target family present but no target declared");
    }
}

const Column& DataTable::column(std::string_view name) const { return columns_[index_of(name)]; }

std::vector<VariableMeta> DataTable::metas() const {
    std::vector<VariableMeta> out;
    out.reserve(columns_.size());
    for (const auto& c : columns_) out.push_back(c.meta);
    return out;
}

std::vector<std::string> DataTable::names() const {
    std::vector<std::string> out;
    out.reserve(columns_.size());
    for (const auto& c : columns_) out.push_back(c.meta.name);
    return out;
}

std::optional<std::size_t> DataTable::find(std::string_view name) const {
    for (std::size_t i = 0; i < columns_.size(); ++i)
        if (columns_[i].meta.name == name) return i;
    return std::nullopt;
}

std::size_t DataTable::index_of(std::string_view name) const {
    auto i = find(name);
    if (!i) throw InvalidArgument("unknown column '" + std::string(name) + "'");
    return *i;
}

DataTable DataTable::select(std::span<const std::string> names) const {
    std::vector<Column> cols;
    std::optional<std::string> tgt;
    for (const auto& n : names) {
        cols.push_back(column(n));
        if (target_ && *target_ == n) tgt = n;
    }
    return DataTable(std::move(cols), tgt);
}

DataTable DataTable::take_rows(std::span<const std::size_t> rows) const {
    std::vector<Column> cols = columns_;
    for (std::size_t j = 0; j < cols.size(); ++j) {
        const auto& src = columns_[j];
        auto& dst = cols[j];
        if (src.meta.kind.is_categorical()) {
            dst.codes.resize(rows.size());
            for (std::size_t i = 0; i < rows.size(); ++i) dst.codes[i] = src.codes.at(rows[i]);
        } else {
            dst.values.resize(rows.size());
            for (std::size_t i = 0; i < rows.size(); ++i) dst.values[i] = src.values.at(rows[i]);
        }
    }
    return DataTable(std::move(cols), target_);
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

// RFC-4180 style record splitting; handles quoted fields with embedded commas,
// doubled quotes and newlines.
std::vector<std::vector<std::string>> split_records(std::string_view text) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> row;
    std::string field;
    bool in_quotes = false;
    bool field_quoted = false;
    auto end_field = [&] {
        row.push_back(field_quoted ? field : std::string(trim(field)));
        field.clear();
        field_quoted = false;
    };
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        if (c == '"' && trim(field).empty()) {
            in_quotes = true;
            field_quoted = true;
            field.clear();
        } else if (c == ',') {
            end_field();
        } else if (c == '\n') {
            end_field();
            if (!(row.size() == 1 && row[0].empty())) records.push_back(std::move(row));
            row.clear();
        } else {
            field += c;
        }
    }
    if (in_quotes) throw IoError("unterminated quoted field");
    if (!field.empty() || !row.empty()) {
        end_field();
        if (!(row.size() == 1 && row[0].empty())) records.push_back(std::move(row));
    }
    return records;
}

std::optional<double> parse_number(std::string_view s) {
    if (s.empty()) return std::nullopt;
    if (s.front() == '+') s.remove_prefix(1);
    double v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

}  // namespace

LoadResult parse_csv(std::string_view text, const std::string& target_name,
                     const std::map<std::string, VariableKind>& kind_overrides) {
    if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
    auto records = split_records(text);
    if (records.empty()) throw IoError("missing header row");
    const auto header = records.front();
    const std::size_t n_cols = header.size();
    {
        std::vector<std::string> sorted = header;
        std::sort(sorted.begin(), sorted.end());
        auto dup = std::adjacent_find(sorted.begin(), sorted.end());
        if (dup != sorted.end()) throw IoError("duplicate column '" + *dup + "'");
    }
    if (!target_name.empty() && std::find(header.begin(), header.end(), target_name) == header.end())
        throw InvalidArgument("target column '" + target_name + "' not found in header");
    for (const auto& [name, kind] : kind_overrides) {
        (void)kind;
        if (std::find(header.begin(), header.end(), name) == header.end())
            throw InvalidArgument("kind override for unknown column '" + name + "'");
    }

    LoadReport report;
    report.rows_read = records.size() - 1;
    std::vector<std::size_t> kept;
    for (std::size_t r = 1; r < records.size(); ++r) {
        if (records[r].size() != n_cols)
            throw IoError("row " + std::to_string(r + 1) + " has " + std::to_string(records[r].size()) +
                          " fields, expected " + std::to_string(n_cols));
        bool complete = std::none_of(records[r].begin(), records[r].end(),
                                     [](const std::string& f) { return f.empty(); });
        if (complete) kept.push_back(r);
    }
    report.rows_dropped = report.rows_read - kept.size();
    if (kept.empty()) throw DataError("empty table");

    std::vector<Column> columns(n_cols);
    for (std::size_t j = 0; j < n_cols; ++j) {
        const std::string& name = header[j];
        Column& col = columns[j];
        col.meta.name = name;
        col.meta.family = family_from_name(name, target_name);

        bool categorical;
        if (auto it = kind_overrides.find(name); it != kind_overrides.end()) {
            categorical = it->second.is_categorical();
        } else {
            switch (col.meta.family) {
                case Family::CopyNumber:
                case Family::Mutation:
                case Family::Target: categorical = true; break;
                case Family::GeneExpression:
                case Family::ProteinLevel: categorical = false; break;
                default:
                    categorical = std::any_of(kept.begin(), kept.end(), [&](std::size_t r) {
                        return !parse_number(records[r][j]).has_value();
                    });
            }
        }

        if (categorical) {
            std::unordered_map<std::string, std::int32_t> index;
            col.codes.reserve(kept.size());
            for (auto r : kept) {
                const auto& cell = records[r][j];
                auto [it, inserted] = index.try_emplace(cell, static_cast<std::int32_t>(col.levels.size()));
                if (inserted) col.levels.push_back(cell);
                col.codes.push_back(it->second);
            }
            col.meta.kind = VariableKind::categorical(static_cast<int>(col.levels.size()));
            if (col.levels.size() == 1) report.warnings.push_back("column '" + name + "' has a single distinct value");
        } else {
            col.values.reserve(kept.size());
            for (auto r : kept) {
                auto v = parse_number(records[r][j]);
                if (!v)
                    throw DataError("non-numeric cell '" + records[r][j] + "' in continuous column '" + name +
                                    "' (row " + std::to_string(r + 1) + ")");
                col.values.push_back(*v);
            }
            col.meta.kind = VariableKind::continuous();
            const auto [lo, hi] = std::minmax_element(col.values.begin(), col.values.end());
            if (*lo == *hi) report.warnings.push_back("column '" + name + "' has a single distinct value");
        }
    }
    std::optional<std::string> target;
    if (!target_name.empty()) target = target_name;
    return {DataTable(std::move(columns), target), std::move(report)};
}

LoadResult load_csv(const std::string& path, const std::string& target_name,
                    const std::map<std::string, VariableKind>& kind_overrides) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open data file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_csv(buf.str(), target_name, kind_overrides);
}

namespace {

std::string csv_escape(const std::string& s) {
    bool quote = s.find_first_of(",\"\n") != std::string::npos || s.empty() ||
                 s.front() == ' ' || s.back() == ' ';
    if (!quote) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

}  // namespace

std::string to_csv(const DataTable& table) {
    std::string out;
    for (std::size_t j = 0; j < table.n_cols(); ++j) {
        if (j) out += ',';
        out += csv_escape(table.meta(j).name);
    }
    out += '\n';
    for (std::size_t i = 0; i < table.n_rows(); ++i) {
        for (std::size_t j = 0; j < table.n_cols(); ++j) {
            if (j) out += ',';
            const auto& col = table.column(j);
            if (col.meta.kind.is_categorical())
                out += csv_escape(col.levels[static_cast<std::size_t>(col.codes[i])]);
            else
                out += format_double(col.values[i]);
        }
        out += '\n';
    }
    return out;
}

void write_csv(const DataTable& table, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << to_csv(table);
    if (!out) throw IoError("write failed for '" + path + "'");
}

namespace {

ContinuousStats continuous_stats(std::span<const double> v) {
    ContinuousStats s;
    s.n = v.size();
    if (v.empty()) return s;
    s.mean = stats::mean(v);
    s.sd = stats::stddev(v);
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    s.min = *lo;
    s.max = *hi;
    return s;
}

}  // namespace

Summary column_summary(const DataTable& table, std::string_view name, bool split_by_target) {
    const std::size_t j = table.index_of(name);
    const Column& col = table.column(j);
    Summary out;
    out.name = col.meta.name;
    out.meta = col.meta;
    out.n_rows = table.n_rows();

    const Column* tcol = nullptr;
    if (split_by_target) {
        if (!table.target()) throw InvalidArgument("split by target requested but no target declared");
        tcol = &table.column(*table.target());
        if (!tcol->meta.kind.is_categorical()) throw InvalidArgument("target must be categorical to split");
        out.target_levels = tcol->levels;
    }
    const std::size_t n_t = out.target_levels.size();

    if (col.meta.kind.is_categorical()) {
        out.levels.resize(col.levels.size());
        for (std::size_t l = 0; l < col.levels.size(); ++l) {
            out.levels[l].level = col.levels[l];
            out.levels[l].by_target.assign(n_t, 0);
        }
        for (std::size_t i = 0; i < table.n_rows(); ++i) {
            auto& lc = out.levels[static_cast<std::size_t>(col.codes[i])];
            ++lc.count;
            if (tcol) ++lc.by_target[static_cast<std::size_t>(tcol->codes[i])];
        }
    } else {
        out.stats = continuous_stats(col.values);
        if (tcol) {
            std::vector<std::vector<double>> groups(n_t);
            for (std::size_t i = 0; i < table.n_rows(); ++i)
                groups[static_cast<std::size_t>(tcol->codes[i])].push_back(col.values[i]);
            for (const auto& g : groups) out.stats_by_target.push_back(continuous_stats(g));
        }
    }
    return out;
}

}  // namespace omicause
