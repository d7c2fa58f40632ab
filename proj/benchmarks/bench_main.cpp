#include <benchmark/benchmark.h>

#include <beamforge/dataset.hpp>
#include <beamforge/error.hpp>
#include <beamforge/influence_zone.hpp>
#include <beamforge/nn.hpp>
#include <beamforge/sampling.hpp>

using namespace beamforge;

namespace {

const SectionCatalog& catalog() {
    static const SectionCatalog c = SectionCatalog::generate();
    return c;
}

BeamSystem sample_system(std::size_t m, std::uint64_t seed) {
    Rng rng(substream_seed(seed, m));
    BeamSystem s = random_system(m, DesignConstraints{}, rng);
    s.section_indices = std::vector<int>(m, 400);
    return s;
}

// Either the first design that converges or a warm system with mid sections.
DesignResult designed(std::size_t m) {
    const auto set = enumerate_arrangements(m, ArrangementMode::patterned);
    for (std::uint64_t seed = 0;; ++seed) {
        try {
            auto s = sample_system(m, seed);
            s.section_indices.reset();
            return design(s, catalog(), SteelGrade{}, DesignConstraints{}, set);
        } catch (const ConvergenceError&) {
        }
    }
}

}  // namespace

static void BM_CatalogGenerate(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(SectionCatalog::generate(1000));
}
BENCHMARK(BM_CatalogGenerate);

static void BM_AnalyzeAllLoaded(benchmark::State& state) {
    const auto m = static_cast<std::size_t>(state.range(0));
    const auto s = sample_system(m, 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(analyze(s, LoadArrangement::all(m), catalog(), SteelGrade{}));
    }
}
BENCHMARK(BM_AnalyzeAllLoaded)->Arg(1)->Arg(5)->Arg(11)->Arg(17);

static void BM_UnitTable(benchmark::State& state) {
    const auto m = static_cast<std::size_t>(state.range(0));
    const BeamModel model(sample_system(m, 2), catalog(), SteelGrade{});
    for (auto _ : state) benchmark::DoNotOptimize(model.unit_table());
}
BENCHMARK(BM_UnitTable)->Arg(11)->Arg(17);

static void BM_GoverningUtilisation(benchmark::State& state) {
    const auto m = static_cast<std::size_t>(state.range(0));
    const BeamModel model(sample_system(m, 3), catalog(), SteelGrade{});
    const auto set = enumerate_arrangements(m, ArrangementMode::patterned);
    for (auto _ : state) benchmark::DoNotOptimize(governing_utilisation(model, set, SteelGrade{}));
}
BENCHMARK(BM_GoverningUtilisation)->Arg(11)->Arg(17);

static void BM_DesignElevenMembers(benchmark::State& state) {
    const auto set = enumerate_arrangements(11, ArrangementMode::patterned);
    auto brief = designed(11).system;
    brief.section_indices.reset();
    for (auto _ : state) {
        benchmark::DoNotOptimize(design(brief, catalog(), SteelGrade{}, DesignConstraints{}, set));
    }
}
BENCHMARK(BM_DesignElevenMembers)->Unit(benchmark::kMillisecond);

static void BM_SystemInfluenceZones(benchmark::State& state) {
    const auto m = static_cast<std::size_t>(state.range(0));
    const auto d = designed(m);
    const auto set = enumerate_arrangements(m, ArrangementMode::patterned);
    for (auto _ : state) {
        benchmark::DoNotOptimize(system_influence_zones(d.system, catalog(), SteelGrade{}, set, 0.02));
    }
}
BENCHMARK(BM_SystemInfluenceZones)->Arg(11)->Arg(17)->Unit(benchmark::kMillisecond);

static void BM_GenerateSystem(benchmark::State& state) {
    const auto set = enumerate_arrangements(11, ArrangementMode::patterned);
    std::uint64_t id = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(generate_system(id++, 11, DesignConstraints{}, catalog(), SteelGrade{},
                                                 set, 5, 7, DatasetOptions{}));
    }
}
BENCHMARK(BM_GenerateSystem)->Unit(benchmark::kMillisecond);

static NetworkConfig bench_net(std::size_t height) {
    NetworkConfig c;
    c.hidden = {height, height};
    return c;
}

static void BM_MlpForward(benchmark::State& state) {
    const Mlp net(bench_net(static_cast<std::size_t>(state.range(0))));
    const Eigen::MatrixXd x = Eigen::MatrixXd::Random(22, 1024).cwiseAbs();
    for (auto _ : state) benchmark::DoNotOptimize(net.forward(x));
    state.SetItemsProcessed(state.iterations() * 1024);
}
BENCHMARK(BM_MlpForward)->Arg(50)->Arg(600);

static void BM_MlpBackward(benchmark::State& state) {
    const Mlp net(bench_net(static_cast<std::size_t>(state.range(0))));
    const Eigen::MatrixXd x = Eigen::MatrixXd::Random(22, 1024).cwiseAbs();
    const Eigen::MatrixXd y = Eigen::MatrixXd::Constant(3, 1024, 0.3);
    Gradients g;
    for (auto _ : state) benchmark::DoNotOptimize(net.loss_and_gradients(x, y, g));
    state.SetItemsProcessed(state.iterations() * 1024);
}
BENCHMARK(BM_MlpBackward)->Arg(50)->Arg(600);

static void BM_NadamStep(benchmark::State& state) {
    Mlp net(bench_net(600));
    const Eigen::MatrixXd x = Eigen::MatrixXd::Random(22, 64).cwiseAbs();
    const Eigen::MatrixXd y = Eigen::MatrixXd::Constant(3, 64, 0.3);
    Gradients g;
    net.loss_and_gradients(x, y, g);
    Nadam opt(net);
    for (auto _ : state) opt.step(net, g);
}
BENCHMARK(BM_NadamStep);
BENCHMARK_MAIN();
