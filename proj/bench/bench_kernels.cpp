#include <map>

#include <benchmark/benchmark.h>

#include "dbfrx/adc_model.hpp"
#include "dbfrx/array_signal.hpp"
#include "dbfrx/dbf_core.hpp"
#include "dbfrx/ddc_fs4.hpp"
#include "dbfrx/fir.hpp"
#include "dbfrx/reference_chain.hpp"

using namespace dbfrx;

namespace {

constexpr double kFs = 1.6e9;

TestSignalSpec fm() {
    TestSignalSpec s;
    s.kind = SignalKind::linear_fm;
    s.carrier_hz = 3.6e9;
    s.base_tone_hz = 1e6;
    s.deviation_hz = 1e8;
    s.arrival_angle_rad = deg_to_rad(10);
    s.amplitude = 0.5;
    return s;
}

struct Scene {
    ArrayConfig array;
    Capture cap;
    ComplexWeightSet weights;
    TruncationWindow window;
    std::vector<IqFrame> beam;
    std::vector<IqFrame> mixed;
    FirSpec fir;

    Scene(int channels, std::size_t samples)
        : array(ArrayConfig::half_wavelength(channels, 3.6e9)),
          cap(capture(synthesize_channels(array, fm(), kFs, samples), AdcConfig{}, 3.6e9)),
          weights(steering_weights(array, deg_to_rad(10))),
          window(TruncationWindow::msb_aligned(channels)),
          beam(beamform_frames(cap, weights, window)),
          mixed(ddc_frames(beam)),
          fir(FirSpec::design(kFs)) {}
};

const Scene& scene(int channels, std::size_t samples) {
    static std::map<std::pair<int, std::size_t>, Scene> cache;
    auto key = std::make_pair(channels, samples);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.try_emplace(key, channels, samples).first;
    return it->second;
}

void set_rate(benchmark::State& state, std::size_t samples) {
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * samples));
}

template <bool Parallel>
void BM_synthesize(benchmark::State& state) {
    const auto samples = static_cast<std::size_t>(state.range(0));
    const auto arr = ArrayConfig::half_wavelength(4, 3.6e9);
    for (auto _ : state) {
        auto s = Parallel ? synthesize_channels(arr, fm(), kFs, samples) : serial::synthesize_channels(arr, fm(), kFs, samples);
        benchmark::DoNotOptimize(s.data());
    }
    set_rate(state, samples);
}

template <bool Parallel>
void BM_capture(benchmark::State& state) {
    const auto samples = static_cast<std::size_t>(state.range(0));
    const auto streams = synthesize_channels(ArrayConfig::half_wavelength(4, 3.6e9), fm(), kFs, samples);
    for (auto _ : state) {
        auto c = Parallel ? capture(streams, AdcConfig{}, 3.6e9) : serial::capture(streams, AdcConfig{}, 3.6e9);
        benchmark::DoNotOptimize(c.frames.data());
    }
    set_rate(state, samples);
}

template <bool Parallel>
void BM_beamform(benchmark::State& state) {
    const auto samples = static_cast<std::size_t>(state.range(0));
    const auto& sc = scene(static_cast<int>(state.range(1)), samples);
    for (auto _ : state) {
        auto b = Parallel ? beamform_frames(sc.cap, sc.weights, sc.window)
                          : serial::beamform_frames(sc.cap, sc.weights, sc.window);
        benchmark::DoNotOptimize(b.data());
    }
    set_rate(state, samples);
}

template <bool Parallel>
void BM_ddc(benchmark::State& state) {
    const auto samples = static_cast<std::size_t>(state.range(0));
    const auto& sc = scene(4, samples);
    for (auto _ : state) {
        auto m = Parallel ? ddc_frames(sc.beam) : serial::ddc_frames(sc.beam);
        benchmark::DoNotOptimize(m.data());
    }
    set_rate(state, samples);
}

template <bool Parallel>
void BM_fir(benchmark::State& state) {
    const auto samples = static_cast<std::size_t>(state.range(0));
    const auto& sc = scene(4, samples);
    for (auto _ : state) {
        auto f = Parallel ? filter_stream(sc.mixed, sc.fir) : serial::filter_stream(sc.mixed, sc.fir);
        benchmark::DoNotOptimize(f.data());
    }
    set_rate(state, samples);
}

void BM_chain(benchmark::State& state) {
    const auto samples = static_cast<std::size_t>(state.range(0));
    const auto& sc = scene(4, samples);
    const auto cfg = PipelineConfig::steered(sc.array, AdcConfig{}, deg_to_rad(10));
    const bool proposed = state.range(1) == 0;
    for (auto _ : state) {
        auto b = proposed ? run_proposed(sc.cap, cfg) : run_standard(sc.cap, cfg);
        benchmark::DoNotOptimize(b.frames.data());
    }
    state.SetLabel(proposed ? "proposed" : "standard");
    set_rate(state, samples);
}

}  // namespace

BENCHMARK(BM_synthesize<false>)->Name("synthesize/serial")->Arg(1 << 16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_synthesize<true>)->Name("synthesize/omp")->Arg(1 << 16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_capture<false>)->Name("capture/serial")->Arg(1 << 18)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_capture<true>)->Name("capture/omp")->Arg(1 << 18)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_beamform<false>)->Name("beamform/serial")->Args({1 << 18, 4})->Args({1 << 18, 16})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_beamform<true>)->Name("beamform/omp")->Args({1 << 18, 4})->Args({1 << 18, 16})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ddc<false>)->Name("ddc/serial")->Arg(1 << 18)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ddc<true>)->Name("ddc/omp")->Arg(1 << 18)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_fir<false>)->Name("fir/serial")->Arg(1 << 18)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_fir<true>)->Name("fir/omp")->Arg(1 << 18)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_chain)->Name("chain")->Args({1 << 18, 0})->Args({1 << 18, 1})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
