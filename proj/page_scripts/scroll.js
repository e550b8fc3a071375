// Copyright 2026 The Trackaudit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Scrolls to each document fraction in turn. The driver draws the fractions
// from the puppet's seeded generator, so this script has no randomness.
// Returns the number of scroll operations performed.

function trackauditScroll(fractions, win) {
  win = win || window;
  const doc = win.document;
  const height = Math.max(doc.documentElement.scrollHeight,
                          doc.body ? doc.body.scrollHeight : 0);
  const room = Math.max(0, height - win.innerHeight);
  let n = 0;
  for (const f of fractions) {
    const clamped = Math.min(1, Math.max(0, Number(f) || 0));
    win.scrollTo(0, Math.round(clamped * room));
    n++;
  }
  return n;
}

if (typeof module !== 'undefined') {
  module.exports = {trackauditScroll};
}
