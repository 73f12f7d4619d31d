#include <gtest/gtest.h>

#include <limits>
#include <sstream>

#include "hlslab/report.hpp"

using namespace hlslab;
using report::Json;

TEST(Report, NonFiniteBecomesNull) {
    EXPECT_TRUE(report::num(std::numeric_limits<double>::infinity()).is_null());
    EXPECT_TRUE(report::num(std::nan("")).is_null());
    EXPECT_EQ(report::num(1.5).get<double>(), 1.5);
}

TEST(Report, DocumentLayoutAndOrder) {
    report::Document d;
    d.meta = {{"n", 3}, {"s", 1.0}, {"L", 32}, {"m", 80}, {"seed", 1}, {"version", report::kVersion}};
    d.records.push_back({{"b", 1}, {"a", 2}});
    d.assertions.push_back(report::check_le("x", 1.0, 2.0));
    d.assertions.push_back(report::check_ge("y", 1.0, 2.0));
    EXPECT_FALSE(d.all_pass());
    const Json j = d.to_json();
    std::vector<std::string> keys;
    for (const auto& [k, v] : j.items()) keys.push_back(k);
    EXPECT_EQ(keys, (std::vector<std::string>{"meta", "records", "summary"}));
    EXPECT_EQ(j["records"][0].begin().key(), "b");
    EXPECT_FALSE(j["summary"]["pass"].get<bool>());
    EXPECT_EQ(j["summary"]["assertions"].size(), 2u);
    std::ostringstream a, b;
    report::write_json(d, a);
    report::write_json(d, b);
    EXPECT_EQ(a.str(), b.str());
}

TEST(Report, Assertions) {
    EXPECT_TRUE(report::check_le("a", 1.0, 1.0).pass);
    EXPECT_FALSE(report::check_le("a", std::nan(""), 1.0).pass);
    EXPECT_TRUE(report::check_true("b", true).pass);
    EXPECT_EQ(report::check_true("b", false).relation, "==");
}

TEST(Report, CsvUnionOfColumns) {
    Json recs = Json::array();
    recs.push_back({{"k", 1}, {"v", 0.1}});
    recs.push_back({{"k", 2}, {"w", "x,y"}, {"ok", true}, {"q", nullptr}});
    std::ostringstream os;
    report::write_csv(recs, os);
    EXPECT_EQ(os.str(), "k,v,w,ok,q\n1,0.10000000000000001,,,\n2,,\"x,y\",true,\n");
}

TEST(Report, ConstantsSerialize) {
    const auto j = report::to_json(constants(Params::make(3, 1.0)));
    EXPECT_NEAR(j["S"].get<double>(), 5.4779, 1e-4);
    EXPECT_TRUE(j.contains("C_loc"));
}
