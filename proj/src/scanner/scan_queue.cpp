#include "gfcsim/scanner/scan_queue.hpp"

namespace gfcsim::scanner {

ScanJob& ScanQueue::upsert(const Tuple& tuple, SimTime cycle, SimTime detected_at, bool& created) {
    auto& slot = jobs_[cycle];
    auto it = slot.find(tuple);
    created = it == slot.end();
    if (created) {
        ScanJob job;
        job.target = tuple;
        job.detected_at = detected_at;
        job.scheduled_for = cycle;
        job.attempt_delay = delays_.uniform_int(0, load_.max_delay(cycle));
        it = slot.emplace(tuple, job).first;
    }
    return it->second;
}

ScanJob ScanQueue::enqueue(const Tuple& tuple, SimTime detected_at) {
    bool created = false;
    ScanJob& job = upsert(tuple, next_multiple(detected_at, period_), detected_at, created);
    job.detect = true;
    if (listener_) listener_(job, created);
    return job;
}

ScanJob ScanQueue::add_revalidation(const Tuple& tuple, SimTime cycle) {
    bool created = false;
    ScanJob& job = upsert(tuple, cycle, cycle, created);
    job.revalidate = true;
    if (listener_) listener_(job, created);
    return job;
}

std::vector<ScanJob> ScanQueue::drain(SimTime cycle) {
    std::vector<ScanJob> out;
    auto it = jobs_.find(cycle);
    if (it == jobs_.end()) return out;
    out.reserve(it->second.size());
    for (auto& [_, job] : it->second) out.push_back(job);
    jobs_.erase(it);
    return out;
}

std::size_t ScanQueue::pending() const {
    std::size_t n = 0;
    for (const auto& [_, slot] : jobs_) n += slot.size();
    return n;
}

}  // namespace gfcsim::scanner
