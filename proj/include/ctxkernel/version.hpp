#pragma once

namespace ctxk {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kPlanSchema = "ctxkernel-plan/1";
inline constexpr const char* kManifestSchema = "ctxkernel-manifest/1";
inline constexpr const char* kAnalysisSchema = "ctxkernel-analysis/1";

} // namespace ctxk
