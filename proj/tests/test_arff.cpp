#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <sstream>
#include <string>

#include "mlbase/arff.hpp"

using mlbase::multi_label_dataset;
using mlbase::parse_label_xml;
using mlbase::parse_meka;
using mlbase::parse_mulan;

namespace {

std::string fixture(const std::string& name) {
  const std::string path = std::string(MLBASE_FIXTURE_DIR) + "/" + name;
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

constexpr const char* kTinyXml = R"(<?xml version="1.0"?>
<labels xmlns="http://mulan.sourceforge.net/labels">
  <label name="y1"/>
  <label name="y2"/>
</labels>
)";

}  // namespace

TEST_CASE("minimal dense document: 3 attributes, 2 labels, 2 rows") {
  const char* arff =
      "@relation tiny\n"
      "@attribute x numeric\n"
      "@attribute y1 {0,1}\n"
      "@attribute y2 {0,1}\n"
      "@data\n"
      "1.5,1,0\n"
      "2.5,0,1\n";
  const multi_label_dataset data = parse_mulan(arff, kTinyXml);
  CHECK(data.name == "tiny");
  CHECK(data.label_count() == 2);
  CHECK(data.feature_count() == 1);
  CHECK(data.size() == 2);
  CHECK(data.label_names == std::vector<std::string>{"y1", "y2"});
  CHECK(data.instances[0].labels.contains(0));
  CHECK_FALSE(data.instances[0].labels.contains(1));
  CHECK(data.instances[1].labels.contains(1));
  CHECK(data.instances[0].features[0].number == 1.5);
}

TEST_CASE("dense fixture file parses with quoting and mixed-case directives") {
  const multi_label_dataset data = parse_mulan(fixture("mini_dense.arff"),
                                               fixture("mini_dense.xml"));
  CHECK(data.name == "mini-dense");
  CHECK(data.size() == 3);
  CHECK(data.feature_count() == 2);
  CHECK(data.label_count() == 2);
  CHECK(data.feature_schema[1].name == "feat two");
  CHECK(data.instances[1].features[0].number == -2.0);
  CHECK(data.instances[2].labels.count() == 2);
}

TEST_CASE("sparse rows expand against the schema") {
  const multi_label_dataset data = parse_mulan(fixture("mini_sparse.arff"),
                                               fixture("mini_sparse.xml"));
  REQUIRE(data.size() == 3);
  REQUIRE(data.feature_count() == 6);
  REQUIRE(data.label_count() == 3);

  // {0 1, 7 1}: feature 0 = 1, label index 1 set, everything else default.
  const mlbase::instance& first = data.instances[0];
  CHECK(first.features[0].number == 1.0);
  for (std::size_t i = 1; i < 6; ++i) CHECK(first.features[i].number == 0.0);
  CHECK(first.labels == mlbase::label_set(3, {1}));

  // {}: all defaults — no labels, all-zero features.
  const mlbase::instance& second = data.instances[1];
  CHECK(second.labels.empty());
  for (std::size_t i = 0; i < 6; ++i) CHECK(second.features[i].number == 0.0);

  // {1 2.5, 6 1, 8 1}
  const mlbase::instance& third = data.instances[2];
  CHECK(third.features[1].number == 2.5);
  CHECK(third.labels == mlbase::label_set(3, {0, 2}));
}

TEST_CASE("MEKA relation: labels first, name stripped of the -C marker") {
  const multi_label_dataset data = parse_meka(fixture("mini_meka.arff"));
  CHECK(data.name == "toy");
  CHECK(data.label_count() == 2);
  CHECK(data.label_names == std::vector<std::string>{"cls1", "cls2"});
  CHECK(data.feature_count() == 2);
  CHECK(data.size() == 3);
  CHECK(data.instances[0].labels == mlbase::label_set(2, {0}));
  CHECK(data.instances[2].labels == mlbase::label_set(2, {0, 1}));
  CHECK(data.instances[0].features[1].text == "red");
}

TEST_CASE("MEKA negative count takes the trailing attributes as labels") {
  const char* arff =
      "@relation 'rev: -C -2'\n"
      "@attribute size numeric\n"
      "@attribute cls1 {0,1}\n"
      "@attribute cls2 {0,1}\n"
      "@data\n"
      "1.0,1,0\n"
      "2.0,0,1\n";
  const multi_label_dataset data = parse_meka(arff);
  CHECK(data.label_names == std::vector<std::string>{"cls1", "cls2"});
  CHECK(data.feature_count() == 1);
  CHECK(data.instances[0].labels == mlbase::label_set(2, {0}));
}

TEST_CASE("MEKA detection from the relation name") {
  CHECK(mlbase::is_meka_relation("toy: -C 2"));
  CHECK(mlbase::is_meka_relation("toy -C -22"));
  CHECK_FALSE(mlbase::is_meka_relation("emotions"));
  CHECK_FALSE(mlbase::is_meka_relation("multi-Class"));   // "-C" not followed by a count
  CHECK_FALSE(mlbase::is_meka_relation("toy: -C 0"));     // zero labels is no convention
  CHECK(mlbase::is_meka_relation("multi-Class -C 3"));    // first "-C" bogus, second real
}

TEST_CASE("missing feature values are kept as missing markers") {
  const multi_label_dataset data = parse_mulan(fixture("missing_values.arff"),
                                               fixture("missing_values.xml"));
  REQUIRE(data.size() == 2);
  CHECK(data.instances[0].features[0].kind == mlbase::feature_value::kind_t::missing);
  CHECK(data.instances[0].features[1].text == "b");
  CHECK(data.instances[1].features[1].kind == mlbase::feature_value::kind_t::missing);
  CHECK(data.instances[0].labels == mlbase::label_set(2, {0}));
}

TEST_CASE("round-trip parse -> serialize -> parse is the identity") {
  const std::string names[] = {"mini_dense", "mini_sparse", "missing_values"};
  for (const std::string& name : names) {
    const multi_label_dataset first =
        parse_mulan(fixture(name + ".arff"), fixture(name + ".xml"));
    const multi_label_dataset second =
        parse_mulan(mlbase::to_arff(first), mlbase::to_label_xml(first));
    INFO("fixture " << name);
    CHECK(first == second);
  }
  const multi_label_dataset meka = parse_meka(fixture("mini_meka.arff"));
  CHECK(meka == parse_mulan(mlbase::to_arff(meka), mlbase::to_label_xml(meka)));
}

TEST_CASE("round-trip preserves awkward names and tokens") {
  // nominal domain with a space-bearing token and a backslash-escaped quote
  const char* arff =
      "@relation 'with space'\n"
      "@attribute 'fe,at' {low,'hi gh','it\\'s'}\n"
      "@attribute y1 {0,1}\n"
      "@attribute y2 {0,1}\n"
      "@data\n"
      "'hi gh',1,0\n"
      "'it\\'s',0,1\n";
  const multi_label_dataset first = parse_mulan(arff, kTinyXml);
  CHECK(first.name == "with space");
  CHECK(first.feature_schema[0].domain == std::vector<std::string>{"low", "hi gh", "it's"});
  CHECK(first.instances[1].features[0].text == "it's");
  const multi_label_dataset second =
      parse_mulan(mlbase::to_arff(first), mlbase::to_label_xml(first));
  CHECK(first == second);
}

TEST_CASE("malformed documents report line numbers") {
  SECTION("row arity mismatch, from fixture file") {
    try {
      parse_mulan(fixture("malformed_row.arff"), "<label name=\"lab1\"/>");
      FAIL("expected parse_error");
    } catch (const mlbase::parse_error& failure) {
      CHECK(failure.line() == 6);
      CHECK(std::string(failure.what()).find("line 6") != std::string::npos);
    }
  }
  SECTION("unknown attribute type, from fixture file") {
    try {
      parse_mulan(fixture("malformed_type.arff"), "<label name=\"lab1\"/>");
      FAIL("expected parse_error");
    } catch (const mlbase::parse_error& failure) {
      CHECK(failure.line() == 2);
    }
  }
  SECTION("unterminated quote") {
    const char* arff =
        "@relation t\n"
        "@attribute a numeric\n"
        "@attribute y1 {0,1}\n"
        "@attribute y2 {0,1}\n"
        "@data\n"
        "1,'oops,0\n";
    try {
      parse_mulan(arff, kTinyXml);
      FAIL("expected parse_error");
    } catch (const mlbase::parse_error& failure) {
      CHECK(failure.line() == 6);
    }
  }
  SECTION("sparse index out of range") {
    const char* arff =
        "@relation t\n"
        "@attribute a numeric\n"
        "@attribute y1 {0,1}\n"
        "@attribute y2 {0,1}\n"
        "@data\n"
        "{9 1}\n";
    try {
      parse_mulan(arff, kTinyXml);
      FAIL("expected parse_error");
    } catch (const mlbase::parse_error& failure) {
      CHECK(failure.line() == 6);
    }
  }
  SECTION("duplicate sparse index") {
    const char* arff =
        "@relation t\n"
        "@attribute a numeric\n"
        "@attribute y1 {0,1}\n"
        "@attribute y2 {0,1}\n"
        "@data\n"
        "{0 1, 0 2}\n";
    CHECK_THROWS_AS(parse_mulan(arff, kTinyXml), mlbase::parse_error);
  }
  SECTION("@attribute before @relation") {
    CHECK_THROWS_AS(parse_mulan("@attribute a numeric\n@data\n1\n", kTinyXml),
                    mlbase::parse_error);
  }
  SECTION("missing @data") {
    CHECK_THROWS_AS(parse_mulan("@relation t\n@attribute a numeric\n", kTinyXml),
                    mlbase::parse_error);
  }
  SECTION("no rows after @data") {
    CHECK_THROWS_AS(parse_mulan("@relation t\n@attribute a numeric\n@data\n", kTinyXml),
                    mlbase::parse_error);
  }
  SECTION("date attributes are rejected") {
    const char* arff =
        "@relation t\n"
        "@attribute when date \"yyyy-MM-dd\"\n"
        "@data\n"
        "2020-01-01\n";
    CHECK_THROWS_AS(parse_mulan(arff, kTinyXml), mlbase::parse_error);
  }
}

TEST_CASE("value domain violations carry line numbers") {
  SECTION("non-numeric token in a numeric column") {
    const char* arff =
        "@relation t\n"
        "@attribute a numeric\n"
        "@attribute y1 {0,1}\n"
        "@attribute y2 {0,1}\n"
        "@data\n"
        "1,1,0\n"
        "x,0,1\n";
    try {
      parse_mulan(arff, kTinyXml);
      FAIL("expected value_error");
    } catch (const mlbase::value_error& failure) {
      CHECK(std::string(failure.what()).find("line 7") != std::string::npos);
    }
  }
  SECTION("nominal token outside the declared domain") {
    const char* arff =
        "@relation t\n"
        "@attribute a {x,y}\n"
        "@attribute y1 {0,1}\n"
        "@attribute y2 {0,1}\n"
        "@data\n"
        "z,1,0\n";
    CHECK_THROWS_AS(parse_mulan(arff, kTinyXml), mlbase::value_error);
  }
  SECTION("label value outside {0,1,true,false}") {
    const char* arff =
        "@relation t\n"
        "@attribute a numeric\n"
        "@attribute y1 numeric\n"
        "@attribute y2 numeric\n"
        "@data\n"
        "1,2,0\n";
    CHECK_THROWS_AS(parse_mulan(arff, kTinyXml), mlbase::value_error);
  }
}

TEST_CASE("schema mismatches between XML and ARFF") {
  const char* arff =
      "@relation t\n"
      "@attribute a numeric\n"
      "@attribute y1 {0,1}\n"
      "@data\n"
      "1,0\n";
  SECTION("XML label missing from the attributes") {
    CHECK_THROWS_AS(parse_mulan(arff, kTinyXml), mlbase::schema_error);  // y2 missing
  }
  SECTION("duplicate label names in the XML") {
    CHECK_THROWS_AS(parse_label_xml("<label name=\"a\"/><label name=\"a\"/>"),
                    mlbase::schema_error);
  }
  SECTION("no labels declared at all") {
    CHECK_THROWS_AS(parse_label_xml("<labels></labels>"), mlbase::schema_error);
  }
  SECTION("non-MEKA relation fed to parse_meka") {
    CHECK_THROWS_AS(parse_meka(arff), mlbase::schema_error);
  }
}

TEST_CASE("label XML entity decoding") {
  const std::vector<std::string> names =
      parse_label_xml("<label name=\"a &amp; b\"/><label name=\"&lt;x&gt;\"/>");
  CHECK(names == std::vector<std::string>{"a & b", "<x>"});
}

TEST_CASE("numeric and true/false label encodings are accepted") {
  const char* arff =
      "@relation t\n"
      "@attribute a numeric\n"
      "@attribute y1 numeric\n"
      "@attribute y2 {false,true}\n"
      "@data\n"
      "1,1,true\n"
      "2,0,false\n";
  const multi_label_dataset data = parse_mulan(arff, kTinyXml);
  CHECK(data.instances[0].labels == mlbase::label_set(2, {0, 1}));
  CHECK(data.instances[1].labels.empty());
}

TEST_CASE("CRLF line endings parse identically") {
  const char* arff =
      "@relation t\r\n"
      "@attribute a numeric\r\n"
      "@attribute y1 {0,1}\r\n"
      "@attribute y2 {0,1}\r\n"
      "@data\r\n"
      "1,1,0\r\n";
  const multi_label_dataset data = parse_mulan(arff, kTinyXml);
  CHECK(data.size() == 1);
  CHECK(data.name == "t");
}
