#include "tsbag/dataset.hpp"
#include "tsbag/errors.hpp"
#include "tsbag/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

using namespace tsbag;

TEST(Dataset, CsvRoundTripIsExact) {
    Rng rng(3);
    std::normal_distribution<double> z(0.0, 1e3);
    TimeSeriesDataset d(50, 4);
    for (std::size_t t = 0; t < 50; ++t)
        for (std::size_t j = 0; j < 4; ++j) d(t, j) = z(rng) * std::pow(10.0, static_cast<int>(t % 9) - 4);
    d(0, 0) = std::numeric_limits<double>::denorm_min();
    d(1, 1) = -0.0;
    EXPECT_EQ(parse_csv(to_csv(d)), d);
}

TEST(Dataset, HeaderIsDetected) {
    const auto d = parse_csv("a,b\n1,2\n3,4.5\n");
    EXPECT_EQ(d.length(), 2u);
    EXPECT_EQ(d.n_vars(), 2u);
    EXPECT_EQ(d(1, 1), 4.5);
    EXPECT_EQ(parse_csv("1,2\r\n3,4\r\n").length(), 2u);
}

TEST(Dataset, NonNumericCellNamesRowAndColumn) {
    try {
        parse_csv("1,2\n3,x\n");
        FAIL();
    } catch (const ParseError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("line 2"), std::string::npos) << msg;
        EXPECT_NE(msg.find("column 2"), std::string::npos) << msg;
    }
    EXPECT_THROW(parse_csv("1,2\n3\n"), ParseError);
    EXPECT_THROW(parse_csv("1,2\n3,\n"), ParseError);
    EXPECT_THROW(parse_csv(""), ParseError);
}

TEST(Dataset, PermutedColumns) {
    TimeSeriesDataset d(2, 3, {1, 2, 3, 4, 5, 6});
    const std::vector<int> perm{2, 0, 1};
    const auto p = d.permuted_columns(perm);
    EXPECT_EQ(p.values(), (std::vector<double>{3, 1, 2, 6, 4, 5}));
}

TEST(Dataset, FormatDoubleRoundTrips) {
    for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 123456789.123}) {
        EXPECT_EQ(std::stod(format_double(v)), v);
    }
}
