#include <benchmark/benchmark.h>

#include <regex>
#include <string>
#include <vector>

#include "leakwarden/catalog.hpp"
#include "leakwarden/classify.hpp"
#include "leakwarden/evaluation.hpp"
#include "leakwarden/pattern.hpp"
#include "leakwarden/scan.hpp"

using namespace leakwarden;

namespace {

const std::string kData = LEAKWARDEN_DATA_DIR;

const std::vector<std::string>& documents() {
  static const auto docs = [] {
    std::vector<std::string> out;
    for (const auto& d : load_corpus_file(kData + "/desk_corpus.json").documents) out.push_back(d.text);
    return out;
  }();
  return docs;
}

const CompiledMatcher& matcher() {
  static const CompiledMatcher m = compile_catalog(load_catalog_file(kData + "/seed_catalog.yaml"));
  return m;
}

const std::vector<Candidate>& candidates() {
  static const auto all = [] {
    std::vector<Candidate> out;
    for (auto& per_doc : extract_batch_serial(documents(), matcher()))
      for (auto& c : per_doc) out.push_back(std::move(c));
    return out;
  }();
  return all;
}

std::vector<ClassifierInput> inputs(std::size_t n) {
  std::vector<ClassifierInput> out;
  const auto& c = candidates();
  for (std::size_t i = 0; i < n; ++i) out.push_back(ClassifierInput::of(c[i % c.size()]));
  return out;
}

std::size_t corpus_bytes() {
  std::size_t n = 0;
  for (const auto& d : documents()) n += d.size();
  return n;
}

void BM_ExtractBatchSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(extract_batch_serial(documents(), matcher()));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * corpus_bytes()));
}
BENCHMARK(BM_ExtractBatchSerial)->Unit(benchmark::kMillisecond);

void BM_ExtractBatchParallel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(extract_batch(documents(), matcher()));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * corpus_bytes()));
}
BENCHMARK(BM_ExtractBatchParallel)->Unit(benchmark::kMillisecond);

void BM_HeuristicScoreSerial(benchmark::State& state) {
  const auto batch = inputs(static_cast<std::size_t>(state.range(0)));
  const HeuristicClassifier h;
  for (auto _ : state) benchmark::DoNotOptimize(h.score_serial(batch));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_HeuristicScoreSerial)->Arg(64)->Arg(4096);

void BM_HeuristicScoreParallel(benchmark::State& state) {
  const auto batch = inputs(static_cast<std::size_t>(state.range(0)));
  const HeuristicClassifier h;
  for (auto _ : state) benchmark::DoNotOptimize(h.score(batch));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_HeuristicScoreParallel)->Arg(64)->Arg(4096);

const std::string kPattern = R"(\bghp_[0-9A-Za-z]{36}\b)";

void BM_PikeVmSingleRule(benchmark::State& state) {
  const auto program = pattern::Program::compile(kPattern);
  std::vector<pattern::Subject> subjects;
  for (const auto& d : documents()) subjects.emplace_back(d);
  for (auto _ : state)
    for (const auto& s : subjects) benchmark::DoNotOptimize(program.scan(s));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * corpus_bytes()));
}
BENCHMARK(BM_PikeVmSingleRule)->Unit(benchmark::kMillisecond);

void BM_StdRegexSingleRule(benchmark::State& state) {
  const std::regex re(kPattern, std::regex::ECMAScript | std::regex::optimize);
  for (auto _ : state) {
    for (const auto& d : documents()) {
      std::size_t n = 0;
      for (std::sregex_iterator it(d.begin(), d.end(), re), end; it != end; ++it) ++n;
      benchmark::DoNotOptimize(n);
    }
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * corpus_bytes()));
}
BENCHMARK(BM_StdRegexSingleRule)->Unit(benchmark::kMillisecond);

void BM_CatalogMatch(benchmark::State& state) {
  for (auto _ : state)
    for (const auto& d : documents()) benchmark::DoNotOptimize(matcher().match(d));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * corpus_bytes()));
}
BENCHMARK(BM_CatalogMatch)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
