// Copyright 2026 The qrw Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QRW_REPORT_H_
#define QRW_REPORT_H_

#include <optional>
#include <string>

#include "qrw/accountant.h"
#include "qrw/rewriting.h"

namespace qrw {

struct RewriteReport {
  std::string sql;
  std::string query_id;
  std::string session;
  // Composed losses, when the query was accounted.
  std::optional<PrivacyLoss> query_loss;
  std::optional<PrivacyLoss> session_loss;
};

// Lines prefixed with "-- " so the text can follow the SQL it describes.
std::string ReportText(const RewriteResult& result,
                       const RewriteReport& report);

// {"sql", "target", "allocation": [{"node", "label", "rule"}],
//  "budget": {"epsilon", "delta", "n_dp", "per_mechanism": {...},
//             "total_allocated": {...}},
//  "mechanisms": [{"node", "epsilon", "delta", "public_keys",
//                  "tau": {...} | null, "events": [{"kind", "c", "sigma",
//                  "epsilon", "delta", "label"}]}],
//  "accounting": {"query", "session", "query_loss", "session_loss"} | null}
std::string ReportJson(const RewriteResult& result,
                       const RewriteReport& report);

}  // namespace qrw

#endif  // QRW_REPORT_H_
