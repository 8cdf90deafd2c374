#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace omicause {

// Categorical(cardinality) or Continuous. Continuous kinds carry no cardinality.
class VariableKind {
public:
    static VariableKind categorical(int cardinality) { return VariableKind(cardinality); }
    static VariableKind continuous() { return VariableKind(0); }

    bool is_categorical() const { return cardinality_ > 0; }
    bool is_continuous() const { return cardinality_ == 0; }
    int cardinality() const { return cardinality_; }

    friend bool operator==(const VariableKind&, const VariableKind&) = default;

private:
    explicit VariableKind(int c) : cardinality_(c) {}
    int cardinality_;
};

enum class Family { CopyNumber, Mutation, GeneExpression, ProteinLevel, Target, Other };

std::string_view family_name(Family f);

// Family from the column-name prefix (cn_, mu_, rs_, pp_). The target column
// is always Family::Target.
Family family_from_name(std::string_view name, std::string_view target);

// Gene symbol for prefixed names ("mu_UBR4" -> "UBR4"); other names unchanged.
std::string gene_symbol(std::string_view name);

struct VariableMeta {
    std::string name;
    VariableKind kind = VariableKind::continuous();
    Family family = Family::Other;
};

// One column. Exactly one of `codes` / `values` is populated, according to the
// kind. Categorical codes index into `levels`.
struct Column {
    VariableMeta meta;
    std::vector<std::int32_t> codes;
    std::vector<double> values;
    std::vector<std::string> levels;
};

// Immutable columnar mixed-type sample matrix.
class DataTable {
public:
    DataTable() = default;
    // Validates column lengths, code ranges and finiteness.
    DataTable(std::vector<Column> columns, std::optional<std::string> target = std::nullopt);

    std::size_t n_rows() const { return n_rows_; }
    std::size_t n_cols() const { return columns_.size(); }

    const Column& column(std::size_t i) const { return columns_.at(i); }
    const Column& column(std::string_view name) const;
    const VariableMeta& meta(std::size_t i) const { return columns_.at(i).meta; }
    std::vector<VariableMeta> metas() const;
    std::vector<std::string> names() const;

    std::optional<std::size_t> find(std::string_view name) const;
    std::size_t index_of(std::string_view name) const;  // throws InvalidArgument

    bool is_categorical(std::size_t i) const { return columns_.at(i).meta.kind.is_categorical(); }
    int cardinality(std::size_t i) const { return columns_.at(i).meta.kind.cardinality(); }
    std::span<const std::int32_t> codes(std::size_t i) const { return columns_.at(i).codes; }
    std::span<const double> values(std::size_t i) const { return columns_.at(i).values; }

    const std::optional<std::string>& target() const { return target_; }

    // New table with the given columns, in the given order. Keeps the target
    // declaration only when the target is among them.
    DataTable select(std::span<const std::string> names) const;

    // New table with rows reordered/subsampled by index.
    DataTable take_rows(std::span<const std::size_t> rows) const;

private:
    std::vector<Column> columns_;
    std::size_t n_rows_ = 0;
    std::optional<std::string> target_;
};

struct LoadReport {
    std::size_t rows_read = 0;
    std::size_t rows_dropped = 0;
    std::vector<std::string> warnings;
};

struct LoadResult {
    DataTable table;
    LoadReport report;
};

// Reads a comma-separated file with a header row. Kinds: cn_/mu_ categorical,
// rs_/pp_ continuous, the target categorical; any other column is continuous
// when every cell parses as a number and categorical otherwise. Overrides win.
// Categorical levels are coded by first appearance. Rows with an empty cell are
// dropped. An empty target_name means no target is declared.
LoadResult load_csv(const std::string& path, const std::string& target_name,
                    const std::map<std::string, VariableKind>& kind_overrides = {});

// Same as load_csv on in-memory text.
LoadResult parse_csv(std::string_view text, const std::string& target_name,
                     const std::map<std::string, VariableKind>& kind_overrides = {});

// Writes level labels for categorical columns and round-trip precision for
// continuous ones.
std::string to_csv(const DataTable& table);
void write_csv(const DataTable& table, const std::string& path);

struct LevelCount {
    std::string level;
    std::size_t count = 0;
    // Per target level counts, aligned with Summary::target_levels.
    std::vector<std::size_t> by_target;
};

struct ContinuousStats {
    std::size_t n = 0;
    double mean = 0, sd = 0, min = 0, max = 0;
};

struct Summary {
    std::string name;
    VariableMeta meta;
    std::size_t n_rows = 0;
    std::vector<LevelCount> levels;  // categorical only
    ContinuousStats stats;           // continuous only
    // Filled when split by target was requested.
    std::vector<std::string> target_levels;
    std::vector<ContinuousStats> stats_by_target;
};

Summary column_summary(const DataTable& table, std::string_view name, bool split_by_target = false);

}  // namespace omicause
