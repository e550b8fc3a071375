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

// Usage: node page_scripts_test.js <page_scripts dir>
'use strict';

const assert = require('node:assert/strict');
const fs = require('node:fs');
const path = require('node:path');
const test = require('node:test');

const dir = path.resolve(process.argv[2] || path.join(__dirname, '..', '..', 'page_scripts'));
const {trackauditAcceptConsent, trackauditGlob} = require(path.join(dir, 'consent.js'));
const {trackauditExtract, trackauditVideoId} = require(path.join(dir, 'extract.js'));
const {trackauditScroll} = require(path.join(dir, 'scroll.js'));
const rules = JSON.parse(fs.readFileSync(path.join(dir, 'consent_rules.json'), 'utf8'));
const selectors = JSON.parse(fs.readFileSync(path.join(dir, 'selectors.json'), 'utf8'));

// Selector strings are looked up verbatim; enough for these scripts.
class FakeNode {
  constructor(children = {}, attrs = {}, text = '') {
    this.children = children;
    this.attrs = attrs;
    this.textContent = text;
    this.clicks = 0;
  }
  querySelector(sel) {
    const v = this.children[sel];
    return Array.isArray(v) ? v[0] || null : v || null;
  }
  querySelectorAll(sel) {
    const v = this.children[sel];
    return Array.isArray(v) ? v : v ? [v] : [];
  }
  getAttribute(name) {
    return name in this.attrs ? this.attrs[name] : null;
  }
  click() {
    this.clicks++;
    if (this.onclick) this.onclick();
  }
}

function tile(href, title, channel) {
  const kids = {};
  if (href !== null) kids[selectors.link] = new FakeNode({}, {href});
  if (title !== null) kids[selectors.title] = new FakeNode({}, {}, `  ${title}\n`);
  if (channel !== null) kids[selectors.channel] = new FakeNode({}, {}, channel);
  return new FakeNode(kids);
}

test('consent rules file shape', () => {
  assert.equal(rules.format, 'trackaudit.consent_rules');
  assert.equal(rules.version, 1);
  assert.ok(rules.rules.length > 0);
  for (const r of rules.rules) {
    assert.equal(typeof r.domain_pattern, 'string');
    assert.ok(r.selector_sequence.length > 0);
  }
});

test('glob agrees with the native matcher cases', () => {
  assert.ok(trackauditGlob('*', ''));
  assert.ok(trackauditGlob('*.youtube.com', 'www.youtube.com'));
  assert.ok(!trackauditGlob('*.youtube.com', 'youtube.com'));
  assert.ok(trackauditGlob('news.?o', 'news.co'));
  assert.ok(!trackauditGlob('news.?o', 'newsxco'));
  assert.ok(trackauditGlob('a*b*c', 'axxbyyc'));
});

test('consent clicks the whole sequence', async () => {
  const first = new FakeNode();
  const second = new FakeNode();
  const doc = new FakeNode({'#a': first});
  first.onclick = () => { doc.children['#b'] = second; };
  const r = [{domain_pattern: '*.example.org', selector_sequence: ['#a', '#b'],
              wait_ms_between: 5}];
  assert.equal(await trackauditAcceptConsent(r, 500, doc, 'www.example.org'), 'accepted');
  assert.equal(first.clicks, 1);
  assert.equal(second.clicks, 1);
});

test('consent outcomes when nothing matches', async () => {
  const r = [{domain_pattern: '*.example.org', selector_sequence: ['#a', '#b']}];
  assert.equal(await trackauditAcceptConsent(r, 100, new FakeNode(), 'other.net'),
               'none_found');
  assert.equal(await trackauditAcceptConsent(r, 100, new FakeNode(), 'x.example.org'),
               'none_found');
  // First step present, second never appears.
  const doc = new FakeNode({'#a': new FakeNode()});
  assert.equal(await trackauditAcceptConsent(r, 120, doc, 'x.example.org'), 'failed');
});

test('consent with shipped rules on a generic banner', async () => {
  const generic = rules.rules.find((r) => r.domain_pattern === '*');
  const kids = {};
  for (const s of generic.selector_sequence) kids[s] = new FakeNode();
  const doc = new FakeNode(kids);
  assert.equal(await trackauditAcceptConsent(rules.rules, 500, doc, 'news.example'),
               'accepted');
});

test('video id extraction', () => {
  assert.equal(trackauditVideoId('/watch?v=abc&t=3', 'v'), 'abc');
  assert.equal(trackauditVideoId('https://x/watch?list=1&v=a%2Db#t', 'v'), 'a-b');
  assert.equal(trackauditVideoId('/shorts/zzz', 'v'), '');
  assert.equal(trackauditVideoId(null, 'v'), '');
});

test('extract emits contiguous positions and counts skips', () => {
  const doc = new FakeNode({[selectors.tile]: [
    tile('/watch?v=one', 'First', 'Chan A'),
    tile('/shorts/nope', 'Short', 'Chan B'),
    tile(null, 'Ad', null),
    tile('/watch?v=two', 'Second', null),
    tile('/watch?v=three', 'Third', 'Chan C'),
  ]});
  const out = trackauditExtract(selectors, 2, doc);
  assert.equal(out.no_matches, false);
  assert.equal(out.skipped, 2);
  assert.deepEqual(out.videos, [
    {video_id: 'one', title: 'First', channel: 'Chan A', position: 1},
    {video_id: 'two', title: 'Second', channel: '', position: 2},
  ]);
  // Round-trips through JSON as the native side reads it.
  assert.deepEqual(JSON.parse(JSON.stringify(out)), out);
});

test('extract flags a page with no tiles', () => {
  const out = trackauditExtract(selectors, 10, new FakeNode());
  assert.deepEqual(out, {videos: [], skipped: 0, no_matches: true});
});

test('scroll clamps fractions to the scrollable range', () => {
  const positions = [];
  const win = {
    innerHeight: 1000,
    document: {documentElement: {scrollHeight: 3000}, body: {scrollHeight: 2500}},
    scrollTo: (x, y) => positions.push(y),
  };
  assert.equal(trackauditScroll([0, 0.5, 1.7, -1, 'x'], win), 5);
  assert.deepEqual(positions, [0, 1000, 2000, 0, 0]);
});
