#pragma once

#include <stdexcept>
#include <string>

namespace tierlab {

// Base for every recoverable input/domain error. The CLI maps these to exit
// code 1; anything else that escapes is an internal failure (exit code 2).
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define TIERLAB_ERROR(NAME)                                    \
  struct NAME : Error {                                        \
    explicit NAME(const std::string& msg) : Error(msg) {}      \
  }

// calendar / timeline
TIERLAB_ERROR(UnknownRegion);
TIERLAB_ERROR(DayOutOfCoverage);
TIERLAB_ERROR(OverlappingIntervals);
TIERLAB_ERROR(GapInCoverage);
TIERLAB_ERROR(BadDate);

// geography
TIERLAB_ERROR(UnknownArea);
TIERLAB_ERROR(CycleDetected);
TIERLAB_ERROR(LevelMismatch);
TIERLAB_ERROR(NotIncident);

// ingestion / files
TIERLAB_ERROR(HeaderMismatch);
TIERLAB_ERROR(MixedBucketInput);
TIERLAB_ERROR(WindowOnDailyData);
TIERLAB_ERROR(NonPositiveReference);
TIERLAB_ERROR(BadFile);

// impact
TIERLAB_ERROR(InsufficientCoverage);
TIERLAB_ERROR(NoMatchingTransitions);
TIERLAB_ERROR(MissingValue);
TIERLAB_ERROR(ZeroBaseline);
TIERLAB_ERROR(LengthMismatch);
TIERLAB_ERROR(DegenerateInput);
TIERLAB_ERROR(KeyMismatch);

// regression
TIERLAB_ERROR(RankDeficient);
TIERLAB_ERROR(TooFewObservations);
TIERLAB_ERROR(MissingRegressor);

// nowcast
TIERLAB_ERROR(InsufficientOverlap);
TIERLAB_ERROR(NoInputForMonth);
TIERLAB_ERROR(MissingBasePeriod);
TIERLAB_ERROR(MissingWeight);

// synthetic scenarios
TIERLAB_ERROR(InvalidConfig);

#undef TIERLAB_ERROR

}  // namespace tierlab
