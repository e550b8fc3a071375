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
// Consent-banner acceptance. Rules come from consent_rules.json; the first
// rule whose domain matches and whose first selector appears within the
// timeout is clicked through in order.
//
// Resolves to "accepted", "none_found" or "failed".

function trackauditGlob(pattern, text) {
  const re = new RegExp('^' + pattern.replace(/[.+^${}()|[\]\\]/g, '\\$&')
      .replace(/\*/g, '.*').replace(/\?/g, '.') + '$');
  return re.test(text);
}

function trackauditWaitFor(doc, selector, timeoutMs, pollMs) {
  return new Promise((resolve) => {
    const deadline = Date.now() + timeoutMs;
    const poll = () => {
      const el = doc.querySelector(selector);
      if (el) return resolve(el);
      if (Date.now() >= deadline) return resolve(null);
      setTimeout(poll, pollMs);
    };
    poll();
  });
}

async function trackauditAcceptConsent(rules, timeoutMs, doc, host) {
  doc = doc || document;
  host = host || (doc.location ? doc.location.hostname : '');
  const candidates = rules.filter((r) => trackauditGlob(r.domain_pattern, host));
  if (candidates.length === 0) return 'none_found';
  const deadline = Date.now() + timeoutMs;
  // Find a rule whose first selector shows up before the deadline.
  let rule = null;
  while (rule === null) {
    rule = candidates.find((r) => doc.querySelector(r.selector_sequence[0])) || null;
    if (rule !== null) break;
    if (Date.now() >= deadline) return 'none_found';
    await new Promise((r) => setTimeout(r, 50));
  }
  for (let i = 0; i < rule.selector_sequence.length; i++) {
    const left = Math.max(0, deadline - Date.now());
    const el = i === 0 ? doc.querySelector(rule.selector_sequence[0])
                       : await trackauditWaitFor(doc, rule.selector_sequence[i], left, 50);
    if (!el) return 'failed';
    try {
      el.click();
    } catch (e) {
      return 'failed';
    }
    if (rule.wait_ms_between > 0 && i + 1 < rule.selector_sequence.length) {
      await new Promise((r) => setTimeout(r, rule.wait_ms_between));
    }
  }
  return 'accepted';
}

if (typeof module !== 'undefined') {
  module.exports = {trackauditAcceptConsent, trackauditGlob};
}
