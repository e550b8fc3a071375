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
// Reads homepage recommendation tiles in visual order.
// Output: {"videos": [{video_id, title, channel, position}], "skipped": n,
//          "no_matches": bool}. Tiles without a video id are skipped and
// counted; positions count only the kept tiles, starting at 1.

function trackauditVideoId(href, param) {
  if (!href) return '';
  const m = href.match(new RegExp('[?&]' + param + '=([^&#]+)'));
  return m ? decodeURIComponent(m[1]) : '';
}

function trackauditExtract(selectors, maxK, doc) {
  doc = doc || document;
  const tiles = Array.from(doc.querySelectorAll(selectors.tile));
  const out = {videos: [], skipped: 0, no_matches: tiles.length === 0};
  for (const tile of tiles) {
    if (out.videos.length >= maxK) break;
    const link = tile.querySelector(selectors.link);
    const id = link ? trackauditVideoId(link.getAttribute('href'),
                                        selectors.id_param || 'v') : '';
    if (!id) {
      out.skipped++;
      continue;
    }
    const text = (sel) => {
      const el = sel ? tile.querySelector(sel) : null;
      return el ? el.textContent.trim() : '';
    };
    out.videos.push({video_id: id, title: text(selectors.title),
                     channel: text(selectors.channel),
                     position: out.videos.length + 1});
  }
  return out;
}

if (typeof module !== 'undefined') {
  module.exports = {trackauditExtract, trackauditVideoId};
}
