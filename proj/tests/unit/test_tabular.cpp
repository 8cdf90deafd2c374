#include <doctest.h>

#include "tabular/data_table.hpp"
#include "util/error.hpp"

using namespace omicause;

namespace {

const char* kCsv =
    "cn_EGFR,mu_UBR4,rs_TP53,pp_AKT1,age,stage,vital_status\n"
    "1,0,2.5,-0.1,61,II,alive\n"
    "0,1,1.5,0.4,70,III,dead\n"
    "-1,0,,0.2,55,II,alive\n"
    "1,1,0.5,0.3,48,I,dead\n";

}  // namespace

TEST_CASE("kinds and families come from the name prefixes") {
    const LoadResult r = parse_csv(kCsv, "vital_status");
    const DataTable& t = r.table;
    CHECK(t.n_rows() == 3);
    CHECK(r.report.rows_read == 4);
    CHECK(r.report.rows_dropped == 1);
    CHECK(t.is_categorical(t.index_of("cn_EGFR")));
    CHECK(t.is_categorical(t.index_of("mu_UBR4")));
    CHECK_FALSE(t.is_categorical(t.index_of("rs_TP53")));
    CHECK_FALSE(t.is_categorical(t.index_of("pp_AKT1")));
    CHECK_FALSE(t.is_categorical(t.index_of("age")));
    CHECK(t.is_categorical(t.index_of("stage")));
    CHECK(t.column("cn_EGFR").meta.family == Family::CopyNumber);
    CHECK(t.column("rs_TP53").meta.family == Family::GeneExpression);
    CHECK(t.column("pp_AKT1").meta.family == Family::ProteinLevel);
    CHECK(t.column("vital_status").meta.family == Family::Target);
    CHECK(t.column("age").meta.family == Family::Other);
    CHECK(t.target() == std::optional<std::string>("vital_status"));
}

TEST_CASE("levels are coded by first appearance") {
    const DataTable t = parse_csv(kCsv, "vital_status").table;
    const Column& c = t.column("cn_EGFR");
    CHECK(c.levels == std::vector<std::string>{"1", "0"});
    CHECK(std::vector<std::int32_t>(c.codes.begin(), c.codes.end()) == std::vector<std::int32_t>{0, 1, 0});
    CHECK(t.cardinality(t.index_of("stage")) == 3);
}

TEST_CASE("kind overrides win over inference") {
    const DataTable t = parse_csv(kCsv, "", {{"age", VariableKind::categorical(2)}}).table;
    CHECK(t.is_categorical(t.index_of("age")));
    CHECK(t.cardinality(t.index_of("age")) == 3);
    CHECK_FALSE(t.target());
    CHECK_THROWS_AS(parse_csv(kCsv, "", {{"nope", VariableKind::continuous()}}), InvalidArgument);
}

TEST_CASE("malformed input is rejected") {
    CHECK_THROWS_AS(parse_csv("", ""), IoError);
    CHECK_THROWS_AS(parse_csv("a,b\n1\n", ""), IoError);
    CHECK_THROWS_AS(parse_csv("a,a\n1,2\n", ""), IoError);
    CHECK_THROWS_AS(parse_csv("a,b\n1,2\n", "c"), InvalidArgument);
    CHECK_THROWS_AS(parse_csv("rs_A,b\nx,1\n", ""), DataError);
    CHECK_THROWS_AS(parse_csv("a,b\n,1\n", ""), DataError);
    CHECK_THROWS_AS(load_csv("/nonexistent/file.csv", ""), IoError);
}

TEST_CASE("constant columns produce a warning") {
    const LoadResult r = parse_csv("a,b\n1,x\n1,y\n", "");
    REQUIRE(r.report.warnings.size() == 1);
    CHECK(r.report.warnings[0].find("'a'") != std::string::npos);
}

TEST_CASE("csv round trip") {
    const DataTable t = parse_csv(kCsv, "vital_status").table;
    const DataTable back = parse_csv(to_csv(t), "vital_status").table;
    CHECK(back.names() == t.names());
    for (std::size_t j = 0; j < t.n_cols(); ++j) {
        CHECK(back.column(j).levels == t.column(j).levels);
        CHECK(back.column(j).values == t.column(j).values);
    }
}

TEST_CASE("select keeps order and the target only when present") {
    const DataTable t = parse_csv(kCsv, "vital_status").table;
    const std::vector<std::string> names{"age", "vital_status"};
    const DataTable s = t.select(names);
    CHECK(s.names() == names);
    CHECK(s.target());
    const std::vector<std::string> no_target{"age"};
    CHECK_FALSE(t.select(no_target).target());
    const std::vector<std::string> unknown{"zzz"};
    CHECK_THROWS_AS(t.select(unknown), InvalidArgument);
}

TEST_CASE("column summaries") {
    const DataTable t = parse_csv(kCsv, "vital_status").table;
    const Summary age = column_summary(t, "age", true);
    CHECK(age.stats.n == 3);
    CHECK(age.stats.mean == doctest::Approx((61.0 + 70.0 + 48.0) / 3.0));
    CHECK(age.stats.min == 48.0);
    CHECK(age.stats.max == 70.0);
    // sample standard deviation of {61, 70, 48}
    CHECK(age.stats.sd == doctest::Approx(11.0604399));
    CHECK(age.target_levels == std::vector<std::string>{"alive", "dead"});
    REQUIRE(age.stats_by_target.size() == 2);
    CHECK(age.stats_by_target[0].mean == 61.0);
    CHECK(age.stats_by_target[1].mean == 59.0);

    const Summary stage = column_summary(t, "stage", true);
    REQUIRE(stage.levels.size() == 3);
    CHECK(stage.levels[0].level == "II");
    CHECK(stage.levels[0].count == 1);
    CHECK(stage.levels[1].by_target == std::vector<std::size_t>{0, 1});

    const DataTable no_target = parse_csv(kCsv, "").table;
    CHECK_THROWS_AS(column_summary(no_target, "age", true), InvalidArgument);
}

TEST_CASE("gene symbols") {
    CHECK(gene_symbol("mu_UBR4") == "UBR4");
    CHECK(gene_symbol("cn_COL14A1") == "COL14A1");
    CHECK(gene_symbol("age") == "age");
    CHECK(family_from_name("mu_X", "mu_X") == Family::Target);
}
