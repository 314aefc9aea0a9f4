#include "sbpairs/error.hpp"

namespace sbpairs {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::malformed_record: return "MalformedRecord";
    case Errc::unknown_stock: return "UnknownStock";
    case Errc::empty_sequence: return "EmptySequence";
    case Errc::missing_history: return "MissingHistory";
    case Errc::incomplete_book: return "IncompleteBook";
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::zero_state: return "ZeroState";
    case Errc::unknown_pair: return "UnknownPair";
    case Errc::orphan_report: return "OrphanReport";
    case Errc::universe_too_large: return "UniverseTooLarge";
    case Errc::incomplete_round_trip: return "IncompleteRoundTrip";
    case Errc::insufficient_data: return "InsufficientData";
    case Errc::invalid_spec: return "InvalidSpec";
    case Errc::invalid_config: return "InvalidConfig";
    case Errc::io: return "IoError";
  }
  return "Unknown";
}

}  // namespace sbpairs
