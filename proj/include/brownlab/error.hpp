#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace brownlab {

enum class ErrorKind {
  InvalidArgument,
  InvalidMeasure,
  DispatchToClosedForm,
  DivergentIntegral,
  NegativeInfinity,
  PoleOnContour,
  BracketFailure,
  NonConvergence,
  StencilOutsideDomain,
  SingularPushforward,
  EnvelopeFailure,
  QrStagnation,
  OutsideUt,
  GammaEqualsT,
  OutsideImage,
  OutsideAnnulus,
  ConfigError,
};

inline std::string_view to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::InvalidMeasure: return "InvalidMeasure";
    case ErrorKind::DispatchToClosedForm: return "DispatchToClosedForm";
    case ErrorKind::DivergentIntegral: return "DivergentIntegral";
    case ErrorKind::NegativeInfinity: return "NegativeInfinity";
    case ErrorKind::PoleOnContour: return "PoleOnContour";
    case ErrorKind::BracketFailure: return "BracketFailure";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::StencilOutsideDomain: return "StencilOutsideDomain";
    case ErrorKind::SingularPushforward: return "SingularPushforward";
    case ErrorKind::EnvelopeFailure: return "EnvelopeFailure";
    case ErrorKind::QrStagnation: return "QrStagnation";
    case ErrorKind::OutsideUt: return "OutsideUt";
    case ErrorKind::GammaEqualsT: return "GammaEqualsT";
    case ErrorKind::OutsideImage: return "OutsideImage";
    case ErrorKind::OutsideAnnulus: return "OutsideAnnulus";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// Config problems map to exit code 2, everything else is numerical.
  bool is_config() const noexcept {
    return kind_ == ErrorKind::ConfigError || kind_ == ErrorKind::InvalidArgument ||
           kind_ == ErrorKind::InvalidMeasure;
  }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace brownlab
