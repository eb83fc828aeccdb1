// Round and per-link word accounting for simulated runs.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace dso {

struct PhaseStats {
  std::string name;
  std::int64_t rounds = 0;
  std::int64_t peak_congestion = 0;  // max words over any channel in the phase
  std::int64_t total_words = 0;
};

class CostLedger {
 public:
  explicit CostLedger(int channels = 0) : link_words_(channels, 0) {}

  std::int64_t rounds() const { return rounds_; }
  const std::vector<std::int64_t>& link_words() const { return link_words_; }
  std::int64_t peak_congestion() const;
  std::int64_t total_words() const;
  std::int64_t bandwidth_violations() const { return violations_; }
  std::int64_t scheduling_warnings() const { return sched_warnings_; }

  void add_rounds(std::int64_t r) { rounds_ += r; }
  void add_words(int channel, std::int64_t w) { link_words_[channel] += w; }
  void add_violation() { ++violations_; }
  void add_scheduling_warning() { ++sched_warnings_; }

  void begin_phase(const std::string& name);
  void end_phase();
  const std::vector<PhaseStats>& phases() const { return phases_; }
  // CSV: phase,rounds,peak_congestion,total_words
  void write_csv(std::ostream& os) const;

 private:
  std::int64_t rounds_ = 0;
  std::vector<std::int64_t> link_words_;
  std::int64_t violations_ = 0;
  std::int64_t sched_warnings_ = 0;
  std::vector<PhaseStats> phases_;
  bool in_phase_ = false;
  std::string phase_name_;
  std::int64_t phase_rounds_start_ = 0;
  std::vector<std::int64_t> phase_words_start_;
};

}  // namespace dso
