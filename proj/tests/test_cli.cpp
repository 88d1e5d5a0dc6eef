#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hammock/cli.hpp"
#include "support.hpp"

using namespace hammock;
using hammock::testing::data_path;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
};

Outcome invoke(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"hammock"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Outcome r;
  r.code = cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

fs::path temp_file(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / "hammock_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

bool contains(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

std::vector<std::string> mileage_args() {
  return {"plot", data_path("auto.csv"), "--labels", data_path("auto_labels.json"),
          "--vars", "mpg,weight,foreign,rep78", "--missing", "--hivar", "mpg", "--hival", ">27"};
}

}  // namespace

TEST(HivalGrammar, Tokens) {
  using K = cli::HivalToken::Kind;
  EXPECT_EQ(cli::parse_hival("missing").kind, K::missing);
  EXPECT_EQ(cli::parse_hival(".").kind, K::missing);
  auto gt = cli::parse_hival(">27");
  EXPECT_EQ(gt.kind, K::greater);
  EXPECT_EQ(gt.number, 27);
  EXPECT_EQ(cli::parse_hival("<3.5").kind, K::less);
  EXPECT_EQ(cli::parse_hival("=1").kind, K::equals);
  EXPECT_EQ(cli::parse_hival("1").kind, K::equals);
  auto lab = cli::parse_hival("\"Pogacar\"");
  EXPECT_EQ(lab.kind, K::label);
  EXPECT_EQ(lab.text, "Pogacar");
  EXPECT_THROW(cli::parse_hival(">"), Error);
  EXPECT_THROW(cli::parse_hival(">abc"), Error);
  EXPECT_THROW(cli::parse_hival("="), Error);
  EXPECT_THROW(cli::parse_hival("  "), Error);
}

TEST(HivalGrammar, ResolveAgainstColumn) {
  Dataset ds = apply_label_map(load_csv(data_path("auto.csv")), data_path("auto_labels.json"));
  EXPECT_EQ(cli::resolve_hival(cli::parse_hival("foreign"), ds.at("foreign")).code, 1);
  EXPECT_EQ(cli::resolve_hival(cli::parse_hival("1"), ds.at("foreign")).code, 1);
  EXPECT_EQ(cli::resolve_hival(cli::parse_hival(">27"), ds.at("mpg")).op, RowPredicate::Op::greater);
  EXPECT_THROW(cli::resolve_hival(cli::parse_hival(">27"), ds.at("foreign")), Error);
  EXPECT_THROW(cli::resolve_hival(cli::parse_hival("1.5"), ds.at("foreign")), Error);
  EXPECT_THROW(cli::resolve_hival(cli::parse_hival("domestik"), ds.at("foreign")), Error);
  EXPECT_THROW(cli::resolve_hival(cli::parse_hival("abc"), ds.at("mpg")), Error);
}

TEST(ParseArgs, MileageInvocation) {
  auto inv = cli::parse_args(mileage_args());
  EXPECT_EQ(inv.command, cli::Subcommand::plot);
  ASSERT_TRUE(inv.plot.varlist);
  EXPECT_EQ(*inv.plot.varlist, (std::vector<std::string>{"mpg", "weight", "foreign", "rep78"}));
  EXPECT_TRUE(inv.plot.missing.value_or(false));
  EXPECT_EQ(inv.plot.hivar, "mpg");
  ASSERT_TRUE(inv.plot.hivals);
  EXPECT_EQ(inv.plot.hivals->size(), 1u);
  EXPECT_FALSE(inv.plot.barwidth);
}

TEST(ParseArgs, StageRaceInvocation) {
  auto inv = cli::parse_args({"plot", data_path("tdf_relative.csv"), "--vars", "d1,d15,d16,d17,d18,d19,d20,d21",
                              "--missing", "--samescale", "all", "--hivar", "rider", "--hival", "Pogacar",
                              "--colorlist", "gs10,red", "--shape", "parallelogram", "--yline", "10",
                              "--text", "50 1.5 \"time gap\"", "--label-format", "%6.0f"});
  EXPECT_EQ(inv.plot.samescale, std::vector<std::string>{"all"});
  EXPECT_EQ(inv.plot.shape, ConnectorShape::parallelogram);
  EXPECT_EQ(inv.plot.colorlist, (std::vector<std::string>{"gs10", "red"}));
  ASSERT_TRUE(inv.plot.annotations);
  EXPECT_EQ((*inv.plot.annotations)[0].text, "time gap");
  EXPECT_EQ((*inv.plot.annotations)[0].x, 1.5);
  EXPECT_EQ(inv.plot.ylines, std::vector<double>{10});

  Dataset ds = cli::load_input(inv);
  PlotSpec spec = cli::resolve_plot_spec(inv, ds);
  EXPECT_EQ(spec.samescale, spec.varlist);
  ASSERT_EQ(spec.hivals.size(), 1u);
  EXPECT_EQ(spec.hivals[0].code, 0);
}

TEST(ParseArgs, ParallelUnivariateInvocation) {
  auto inv = cli::parse_args({"plot", data_path("auto.csv"), "--vars", "mpg,foreign", "--space", "1",
                              "--hivar", "foreign", "--hival", "1", "--colorlist", "gs10,blue%30"});
  Dataset ds = cli::load_input(inv);
  PlotSpec spec = cli::resolve_plot_spec(inv, ds);
  EXPECT_EQ(spec.space, 1.0);
  EXPECT_EQ(spec.colorlist.back(), "blue%30");
}

TEST(ParseArgs, OrderSubcommand) {
  auto inv = cli::parse_args({"order", data_path("auto.csv"), "--vars", "mpg,price,weight", "--start", "mpg",
                              "--mode", "min"});
  EXPECT_EQ(inv.command, cli::Subcommand::order);
  EXPECT_EQ(inv.order_vars, (std::vector<std::string>{"mpg", "price", "weight"}));
  EXPECT_EQ(inv.mode, OrderMode::min_sq_corr);
}

TEST(ParseArgs, TypeHintsAndMissingTokens) {
  auto inv = cli::parse_args({"plot", "x.csv", "--vars", "a,b", "--type", "a=categorical", "--missing-token", "NA"});
  EXPECT_EQ(inv.type_hints.at("a"), ColumnKind::categorical);
  ASSERT_TRUE(inv.missing_tokens);
  EXPECT_EQ(*inv.missing_tokens, std::set<std::string>{"NA"});
  EXPECT_THROW(cli::parse_args({"plot", "x.csv", "--type", "a=weird"}), Error);
  EXPECT_THROW(cli::parse_args({"plot", "x.csv", "--type", "nokind"}), Error);
}

TEST(Run, OrderPrintsGreedySequence) {
  auto r = invoke({"order", data_path("auto.csv"), "--vars", "mpg,weight,foreign,rep78,headroom,price", "--start",
                   "mpg"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "mpg,weight,foreign,rep78,headroom,price\n");
}

TEST(Run, WritesSvgFile) {
  fs::path out = temp_file("mileage.svg");
  fs::remove(out);
  auto args = mileage_args();
  args.insert(args.end(), {"-o", out.string()});
  auto r = invoke(args);
  EXPECT_EQ(r.code, 0) << r.err;
  ASSERT_TRUE(fs::exists(out));
  EXPECT_GT(fs::file_size(out), 0u);
  std::ifstream in(out);
  std::string first;
  std::getline(in, first);
  EXPECT_TRUE(contains(first, "<?xml"));
}

TEST(Run, StdoutWhenNoOutputPath) {
  auto r = invoke(mileage_args());
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(contains(r.out, "</svg>"));
  EXPECT_TRUE(r.err.empty());
}

TEST(Run, UnknownHighlightColumn) {
  auto args = mileage_args();
  args[8] = "zzz";
  auto r = invoke(args);
  EXPECT_EQ(r.code, 2);
  EXPECT_TRUE(contains(r.err, "zzz"));
}

TEST(Run, KindMismatchOnCategoricalHighlight) {
  auto r = invoke({"plot", data_path("auto.csv"), "--labels", data_path("auto_labels.json"), "--vars", "mpg,foreign",
                   "--hivar", "foreign", "--hival", ">27"});
  EXPECT_NE(r.code, 0);
  EXPECT_TRUE(contains(r.err, "foreign"));
  EXPECT_TRUE(contains(r.err, "categorical"));
}

TEST(Run, UnknownFlagIsUsageError) {
  auto args = mileage_args();
  args.push_back("--bogus-flag");
  auto r = invoke(args);
  EXPECT_EQ(r.code, 1);
  EXPECT_TRUE(contains(r.err, "--bogus-flag"));
}

TEST(Run, MalformedPredicateIsUsageError) {
  auto args = mileage_args();
  args[10] = ">";
  auto r = invoke(args);
  EXPECT_EQ(r.code, 1);
  EXPECT_TRUE(contains(r.err, "hival"));
}

TEST(Run, MissingInputIsDataError) {
  auto r = invoke({"plot", "/nonexistent/input.csv", "--vars", "a,b"});
  EXPECT_EQ(r.code, 2);
  EXPECT_TRUE(contains(r.err, "/nonexistent/input.csv"));
}

TEST(Run, HivalWithoutHivarIsUsageError) {
  auto r = invoke({"plot", data_path("auto.csv"), "--vars", "mpg,foreign", "--hival", "1"});
  EXPECT_EQ(r.code, 1);
}

TEST(Run, BadAnnotationIsRenderError) {
  auto args = mileage_args();
  args.insert(args.end(), {"--text", "50 9 off the chart"});
  auto r = invoke(args);
  EXPECT_EQ(r.code, 3);
  EXPECT_TRUE(contains(r.err, "off the chart"));
}

TEST(Run, WarnsOnEmptyHighlight) {
  auto args = mileage_args();
  args[10] = ">100";
  auto r = invoke(args);
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(contains(r.err, "warning"));
}

TEST(Run, HelpExitsCleanly) {
  auto r = invoke({"plot", "--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(contains(r.out, "--hival"));
}

TEST(SpecFile, FlagsOverrideFileValues) {
  fs::path spec = temp_file("spec.json");
  std::ofstream(spec) << R"({"varlist": ["mpg", "weight"], "barwidth": 0.5, "missing": true,
                             "hivar": "foreign", "hivals": ["1"], "colorlist": ["gs10", "red"]})";
  auto inv = cli::parse_args({"plot", data_path("auto.csv"), "--spec", spec.string(), "--barwidth", "2"});
  Dataset ds = cli::load_input(inv);
  PlotSpec s = cli::resolve_plot_spec(inv, ds);
  EXPECT_EQ(s.barwidth, 2.0);
  EXPECT_TRUE(s.missing);
  EXPECT_EQ(s.varlist, (std::vector<std::string>{"mpg", "weight"}));
  EXPECT_EQ(s.colorlist, (std::vector<std::string>{"gs10", "red"}));
  ASSERT_EQ(s.hivals.size(), 1u);
}

TEST(SpecFile, UnknownKeysRejected) {
  fs::path spec = temp_file("bad_spec.json");
  std::ofstream(spec) << R"({"varlist": ["mpg", "weight"], "bar_width": 2})";
  auto r = invoke({"plot", data_path("auto.csv"), "--spec", spec.string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_TRUE(contains(r.err, "bar_width"));
}

TEST(Run, OptionCombinationsOnFixtures) {
  const std::vector<std::vector<std::string>> extras{
      {},
      {"--shape", "parallelogram"},
      {"--space", "0", "--nounibar", "--nolabel"},
      {"--space", "1"},
      {"--minbarfreq", "5", "--barwidth", "0.5"},
      {"--uni-fraction", "1", "--label-format", "%9.2f"},
      {"--color", "black", "--yline", "10", "--width", "800", "--height", "500", "--label-size", "8"},
      {"--category-order", "foreign=1,0"},
  };
  for (const auto& extra : extras) {
    auto args = mileage_args();
    args.insert(args.end(), extra.begin(), extra.end());
    auto r = invoke(args);
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(contains(r.out, "</svg>"));
  }
  auto tdf = invoke({"plot", data_path("tdf.csv"), "--vars", "s1,s15,s16,s17,s18,s19,s20,s21", "--missing",
                     "--hivar", "rider", "--hival", "Pogacar", "--hival", "Roglic", "--colorlist", "gs10,red,blue"});
  EXPECT_EQ(tdf.code, 0) << tdf.err;
}

TEST(Run, NoColorEnvironmentStripsOpacity) {
  auto args = mileage_args();
  args.insert(args.end(), {"--colorlist", "gs10%50,red"});
  EXPECT_TRUE(contains(invoke(args).out, "fill-opacity"));
  ::setenv("HAMMOCK_NO_COLOR", "1", 1);
  auto r = invoke(args);
  ::unsetenv("HAMMOCK_NO_COLOR");
  EXPECT_FALSE(contains(r.out, "fill-opacity"));
}

TEST(Binary, ExitStatusesFromProcess) {
  std::string bin = HAMMOCK_CLI_PATH;
  fs::path out = temp_file("binary.svg");
  std::string ok = "\"" + bin + "\" plot \"" + data_path("auto.csv") + "\" --vars mpg,weight -o \"" + out.string() +
                   "\" 2>/dev/null";
  int status = std::system(ok.c_str());
  EXPECT_EQ(WEXITSTATUS(status), 0);
  EXPECT_GT(fs::file_size(out), 0u);
  std::string bad = "\"" + bin + "\" plot \"" + data_path("auto.csv") + "\" --vars mpg,nope 2>/dev/null >/dev/null";
  EXPECT_EQ(WEXITSTATUS(std::system(bad.c_str())), 2);
  std::string usage = "\"" + bin + "\" plot --nonsense 2>/dev/null >/dev/null";
  EXPECT_EQ(WEXITSTATUS(std::system(usage.c_str())), 1);
}
