#pragma once

namespace warplearn {

inline constexpr const char* kLibraryVersion = "0.1.0";

// Format tags embedded in every file artifact so readers can reject
// incompatible layouts.
inline constexpr const char* kModelFormat = "warplearn-model/1";
inline constexpr const char* kPrototypeFormat = "warplearn-prototypes/1";
inline constexpr const char* kReportFormat = "warplearn-report/1";

}  // namespace warplearn
