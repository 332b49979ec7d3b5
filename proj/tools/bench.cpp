// Benchmark: serial reference kernels vs their OpenMP counterparts.
// Covers the row-parallel CAM search, the per-read classification scan, and
// the Monte-Carlo match-probability sweep; verifies both variants agree
// before timing them.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include <omp.h>

#include "hdcam/bitword.hpp"
#include "hdcam/genomics.hpp"
#include "hdcam/matchline.hpp"
#include "hdcam/rng.hpp"
#include "hdcam/variation.hpp"

using namespace hdcam;
using clock_type = std::chrono::steady_clock;

namespace {

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

std::string random_genome(std::size_t n, std::uint64_t seed) {
    static constexpr char bases[] = "ACGT";
    std::string s(n, 'A');
    CounterRng rng(seed, 99, 0, 0);
    for (auto& c : s) c = bases[rng.next_base()];
    return s;
}

template <typename F>
double time_best_of(int reps, F&& f) {
    double best = 1e300;
    for (int i = 0; i < reps; ++i) {
        const auto t0 = clock_type::now();
        f();
        best = std::min(best, seconds_since(t0));
    }
    return best;
}

} // namespace

int main(int argc, char** argv) {
    std::size_t rows = 29903;
    unsigned queries = 200;
    unsigned trials = 1000;
    for (int i = 1; i + 1 < argc; i += 2) {
        const std::string key = argv[i];
        if (key == "--rows") rows = std::stoull(argv[i + 1]);
        else if (key == "--queries") queries = static_cast<unsigned>(std::stoul(argv[i + 1]));
        else if (key == "--trials") trials = static_cast<unsigned>(std::stoul(argv[i + 1]));
    }

    std::printf("hdcam-bench: %zu rows x 256 bits, %u queries, %u MC trials/distance, "
                "%d OpenMP threads\n\n",
                rows, queries, trials, omp_get_max_threads());

    Genome genome{"bench", "", random_genome(rows + 64 + kReadSlackBases, 7)};
    const KmerDb db = build_db(genome, 64, Encoding{EncodingKind::OneHot4}, false);

    std::vector<BitWord> query_words;
    for (unsigned q = 0; q < queries; ++q) {
        const auto read = simulate_read(genome, (q * 131) % (genome.length() - 64 - 8), 64,
                                        ReadErrorProfile{}, 42, q);
        query_words.push_back(encode(read.bases, db.encoding));
    }

    // search: every row vs query at a fixed distance threshold
    unsigned hits_serial = 0, hits_parallel = 0;
    const double t_search_serial = time_best_of(3, [&] {
        hits_serial = 0;
        for (const auto& q : query_words)
            hits_serial += static_cast<unsigned>(search_oracle_serial(db.array, q, 32).size());
    });
    const double t_search_parallel = time_best_of(3, [&] {
        hits_parallel = 0;
        for (const auto& q : query_words)
            hits_parallel += static_cast<unsigned>(search_oracle(db.array, q, 32).size());
    });
    std::printf("search_oracle      serial %8.3f ms   openmp %8.3f ms   speedup %.2fx   %s\n",
                t_search_serial * 1e3, t_search_parallel * 1e3,
                t_search_serial / t_search_parallel,
                hits_serial == hits_parallel ? "results match" : "RESULTS DIFFER");

    // classification distance scan
    unsigned best_serial = 0, best_parallel = 0;
    const double t_min_serial = time_best_of(3, [&] {
        best_serial = 0;
        for (const auto& q : query_words) best_serial += min_distance_serial(db.array, q);
    });
    const double t_min_parallel = time_best_of(3, [&] {
        best_parallel = 0;
        for (const auto& q : query_words) best_parallel += min_distance(db.array, q);
    });
    std::printf("min_distance       serial %8.3f ms   openmp %8.3f ms   speedup %.2fx   %s\n",
                t_min_serial * 1e3, t_min_parallel * 1e3, t_min_serial / t_min_parallel,
                best_serial == best_parallel ? "results match" : "RESULTS DIFFER");

    // Monte-Carlo curve around the nominal threshold
    MatchlineParams params;
    params.v_evalth = 0.465 * params.v_dd;
    VariationSpec spec;
    spec.sigma_t = 50e-12;
    spec.trials = trials;
    spec.seed = 1;
    const unsigned mt = nominal_mt(params);
    const unsigned d_lo = mt > 30 ? mt - 30 : 0;
    const unsigned d_hi = std::min<unsigned>(mt + 30, static_cast<unsigned>(params.word_bits));

    MatchCurve curve_serial, curve_parallel;
    const double t_mc_serial = time_best_of(3, [&] {
        curve_serial = match_probability_curve_serial(params, spec, d_lo, d_hi);
    });
    const double t_mc_parallel = time_best_of(3, [&] {
        curve_parallel = match_probability_curve(params, spec, d_lo, d_hi);
    });
    std::printf("mc_curve (d %u..%u) serial %8.3f ms   openmp %8.3f ms   speedup %.2fx   %s\n",
                d_lo, d_hi, t_mc_serial * 1e3, t_mc_parallel * 1e3, t_mc_serial / t_mc_parallel,
                curve_serial.match_counts == curve_parallel.match_counts ? "results match"
                                                                         : "RESULTS DIFFER");

    const bool ok = hits_serial == hits_parallel && best_serial == best_parallel &&
                    curve_serial.match_counts == curve_parallel.match_counts;
    return ok ? 0 : 1;
}
