#include "dso/ledger.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace dso {

std::int64_t CostLedger::peak_congestion() const {
  std::int64_t p = 0;
  for (auto w : link_words_) p = std::max(p, w);
  return p;
}

std::int64_t CostLedger::total_words() const {
  return std::accumulate(link_words_.begin(), link_words_.end(),
                         std::int64_t{0});
}

void CostLedger::begin_phase(const std::string& name) {
  if (in_phase_) throw std::logic_error("nested ledger phase");
  in_phase_ = true;
  phase_name_ = name;
  phase_rounds_start_ = rounds_;
  phase_words_start_ = link_words_;
}

void CostLedger::end_phase() {
  if (!in_phase_) throw std::logic_error("end_phase without begin_phase");
  in_phase_ = false;
  PhaseStats ps;
  ps.name = phase_name_;
  ps.rounds = rounds_ - phase_rounds_start_;
  for (std::size_t i = 0; i < link_words_.size(); ++i) {
    std::int64_t d = link_words_[i] - phase_words_start_[i];
    ps.peak_congestion = std::max(ps.peak_congestion, d);
    ps.total_words += d;
  }
  phases_.push_back(std::move(ps));
}

void CostLedger::write_csv(std::ostream& os) const {
  os << "phase,rounds,peak_congestion,total_words\n";
  for (const PhaseStats& p : phases_)
    os << p.name << ',' << p.rounds << ',' << p.peak_congestion << ','
       << p.total_words << '\n';
  os << "total," << rounds_ << ',' << peak_congestion() << ',' << total_words()
     << '\n';
}

}  // namespace dso
