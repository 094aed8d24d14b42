#include "pgt/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iostream>
#include <thread>

namespace pgt {

ImageCounts& ImageCounts::operator+=(const ImageCounts& o)
{
    detections += o.detections;
    proposals += o.proposals;
    exact += o.exact;
    close += o.close;
    rejects += o.rejects;
    recognitions += o.recognitions;
    return *this;
}

ImageResult pgt_gen(const ImageRef& image, const std::vector<Detection>& detections,
                    const WeakLabelSet& labels, RecognitionBackend& backend,
                    const SearchConstants& consts, const AcceptThresholds& thresholds, Rng& rng,
                    int iteration)
{
    ImageResult out;
    out.counts.detections = detections.size();
    const auto proposals = assign_weak(detections, labels, rng);
    out.counts.proposals = proposals.size();

    for (const Proposal& p : proposals) {
        const SearchOutcome found = find_optimal_box(image, p.detection, p.label, backend, consts);
        out.counts.recognitions += found.total_recognitions;
        const AcceptDecision decision = is_pgt(found.text, p.label, thresholds);
        if (decision.kind == AcceptKind::reject) {
            ++out.counts.rejects;
            continue;
        }
        if (decision.kind == AcceptKind::exact) {
            ++out.counts.exact;
        } else {
            ++out.counts.close;
        }
        out.records.push_back(
            {image.id, found.box, p.label, found.text, decision.d, decision.kind, iteration});
    }
    return out;
}

std::vector<PgtRecord> exact_match_baseline(const std::string& image_id,
                                            const std::vector<Detection>& detections,
                                            const WeakLabelSet& labels, Rng& rng, int iteration)
{
    std::vector<PgtRecord> out;
    for (const Proposal& p : assign_weak(detections, labels, rng)) {
        if (p.distance != 0) continue;
        out.push_back({image_id, p.detection.box, p.label, p.detection.text, 0.0, AcceptKind::exact,
                       iteration});
    }
    return out;
}

std::vector<PgtRecord> confidence_filter(const std::string& image_id,
                                         const std::vector<Detection>& detections, double t,
                                         int iteration)
{
    if (t < 0.0 || t > 1.0) throw std::invalid_argument("confidence threshold outside [0, 1]");
    std::vector<PgtRecord> out;
    for (const Detection& d : detections) {
        if (!(d.confidence > t)) continue;
        out.push_back({image_id, d.box, d.text, d.text, 0.0, AcceptKind::exact, iteration});
    }
    return out;
}

namespace {

struct ImageOutcome {
    ImageResult result;
    std::vector<PgtRecord> baseline;
    std::optional<std::string> error;
};

ImageOutcome mine_image(const ImageItem& item, RecognitionBackend& backend,
                        const MiningOptions& options, int iteration)
{
    ImageOutcome out;
    try {
        ImageRef image{item.image_id, item.size ? item.size : backend.image_size(item.image_id)};

        std::vector<Detection> detections = item.detections;
        if (options.rerecognize_detections && !detections.empty()) {
            std::vector<OrientedBox> boxes;
            boxes.reserve(detections.size());
            for (const auto& d : detections) boxes.push_back(d.box);
            const auto read = backend.recognize_batch(item.image_id, boxes);
            if (read.size() != boxes.size()) throw ProtocolError("backend returned a misaligned batch");
            for (std::size_t i = 0; i < detections.size(); ++i) {
                detections[i].text = read[i].text;
                detections[i].confidence = read[i].confidence;
            }
        }

        const WeakLabelSet labels = expand_kgrams(item.texts, options.k_max);
        const std::uint64_t image_seed = derive_seed(options.seed, item.image_id);

        Rng baseline_rng(image_seed);
        out.baseline = exact_match_baseline(item.image_id, detections, labels, baseline_rng, iteration);

        Rng rng(image_seed);
        out.result = pgt_gen(image, detections, labels, backend, options.consts, options.thresholds,
                             rng, iteration);
    } catch (const std::exception& e) {
        out = ImageOutcome{};
        out.error = e.what();
    }
    return out;
}

}  // namespace

IterationOutput mine_once(const Dataset& dataset, RecognitionBackend& backend,
                          const MiningOptions& options, int iteration)
{
    std::vector<ImageOutcome> outcomes(dataset.size());
    const std::size_t workers =
        backend.concurrent() ? std::max<std::size_t>(1, std::min(options.parallelism, dataset.size()))
                             : 1;

    if (workers <= 1) {
        for (std::size_t i = 0; i < dataset.size(); ++i) {
            outcomes[i] = mine_image(dataset[i], backend, options, iteration);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < dataset.size(); i = next++) {
                    outcomes[i] = mine_image(dataset[i], backend, options, iteration);
                }
            });
        }
    }

    IterationOutput out;
    out.stats.iteration = iteration;
    out.stats.images = dataset.size();
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        auto& o = outcomes[i];
        if (o.error) {
            ++out.stats.failed_images;
            out.failures.push_back({iteration, dataset[i].image_id, *o.error});
            const std::string line = "iteration " + std::to_string(iteration) + ": image '" +
                                     dataset[i].image_id + "' skipped: " + *o.error;
            if (options.log) {
                options.log(line);
            } else {
                std::cerr << line << '\n';
            }
            continue;
        }
        out.stats.counts += o.result.counts;
        std::move(o.result.records.begin(), o.result.records.end(), std::back_inserter(out.pgt));
        std::move(o.baseline.begin(), o.baseline.end(), std::back_inserter(out.baseline));
    }
    out.stats.mined_with_ns = out.pgt.size();
    out.stats.mined_without_ns = out.baseline.size();
    return out;
}

MiningResult mine_iterations(const Dataset& dataset, const BackendFactory& backend_factory,
                             const MiningOptions& options)
{
    if (options.max_iters < 1) throw std::invalid_argument("max_iters must be at least 1");

    MiningResult out;
    for (int it = 1; it <= options.max_iters; ++it) {
        auto backend = backend_factory(it);
        if (!backend) throw std::invalid_argument("backend factory returned no backend");
        IterationOutput pass = mine_once(dataset, *backend, options, it);

        const std::size_t mined = pass.stats.mined_with_ns;
        out.pgt.push_back(std::move(pass.pgt));
        out.baseline.push_back(std::move(pass.baseline));
        out.stats.iterations.push_back(pass.stats);
        std::move(pass.failures.begin(), pass.failures.end(),
                  std::back_inserter(out.stats.failures));

        if (it >= 2) {
            const std::size_t previous = out.stats.iterations[out.stats.iterations.size() - 2].mined_with_ns;
            const auto threshold = static_cast<std::ptrdiff_t>(
                options.stop_delta ? *options.stop_delta
                                   : static_cast<std::size_t>(std::ceil(0.01 * double(previous))));
            const auto increase =
                static_cast<std::ptrdiff_t>(mined) - static_cast<std::ptrdiff_t>(previous);
            if (increase < threshold) break;
        }
    }
    return out;
}

}  // namespace pgt
