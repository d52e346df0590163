#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "fieldguard/error_table.hpp"
#include "fieldguard/errors.hpp"

namespace fg = fieldguard;

TEST(ErrorCsv, ReadsFixtureWithHeader) {
    const auto rows = fg::read_error_csv(std::filesystem::path(FIELDGUARD_FIXTURE_DIR) / "distance_errors.csv");
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[0].label(), "Bottles");
    EXPECT_DOUBLE_EQ(rows[2].obtained_m(), 0.72);
    EXPECT_DOUBLE_EQ(rows[3].actual_m(), 0.91);
}

TEST(ErrorCsv, SkipsBlankAndComments) {
    std::istringstream in("# measured 2020\n\n a , 1.1 , 1.0 \n+b,0.9,1.0\n");
    const auto rows = fg::read_error_csv(in);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0].label(), "a");
    EXPECT_NEAR(rows[0].percent_error(), 10.0, 1e-9);
}

TEST(ErrorCsv, Errors) {
    std::istringstream short_row("a,1.0\n");
    EXPECT_THROW(fg::read_error_csv(short_row), fg::ProtocolError);
    std::istringstream not_number("a,1.0,1.0\nb,x,1.0\n");
    EXPECT_THROW(fg::read_error_csv(not_number), fg::ProtocolError);
    std::istringstream zero_actual("a,1.0,0\n");
    EXPECT_THROW(fg::read_error_csv(zero_actual), fg::ProtocolError);
    EXPECT_THROW(fg::read_error_csv(std::filesystem::path("/no/such.csv")), fg::ProtocolError);
}

TEST(ErrorReport, Formats) {
    const std::vector<fg::ErrorRecord> rows{{"Bottles", 1.79, 1.52}, {"Backpack", 0.72, 0.91}};
    const std::string text = fg::format_error_report(rows, fg::summarize_errors(rows));
    EXPECT_NE(text.find("+17.76"), std::string::npos);
    EXPECT_NE(text.find("-20.88"), std::string::npos);
    EXPECT_NE(text.find("mean positive error: +17.76 %"), std::string::npos);

    const std::string empty = fg::format_error_report({}, fg::summarize_errors(std::vector<fg::ErrorRecord>{}));
    EXPECT_NE(empty.find("mean negative error: n/a"), std::string::npos);
}
