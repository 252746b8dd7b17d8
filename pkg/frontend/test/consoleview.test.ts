import { describe, expect, it } from 'vitest';

import { escapeHtml, isErrorLine, renderConsolePane, renderLines } from '../src/consoleview.js';

describe('console rendering', () => {
  it('flags known error classes', () => {
    expect(isErrorLine('UnsupportedApi: $.setAmbientLight is not part of the item API')).toBe(true);
    expect(isErrorLine('ParseError: unexpected token (line 1, column 3)')).toBe(true);
    expect(isErrorLine('BudgetExceeded: instruction budget exhausted')).toBe(true);
    expect(isErrorLine('MissingFixture: no fixture for digest abc')).toBe(true);
    expect(isErrorLine('NothingToApply: no pending script')).toBe(true);
  });

  it('leaves ordinary log lines plain', () => {
    expect(isErrorLine('spinning at 90 deg/s')).toBe(false);
    expect(isErrorLine('42')).toBe(false);
    expect(isErrorLine('the Timeout was fine')).toBe(false);
  });

  it('escapes markup in lines', () => {
    expect(escapeHtml('<script>alert(1)</script>')).toBe('&lt;script&gt;alert(1)&lt;/script&gt;');
    expect(escapeHtml('a & b "c"')).toBe('a &amp; b &quot;c&quot;');
  });

  it('renders error lines with the error class', () => {
    const html = renderLines(['hello', 'TypeMismatch: cannot add']);
    expect(html).toContain('<div class="line">hello</div>');
    expect(html).toContain('<div class="line error">TypeMismatch: cannot add</div>');
  });

  it('renders sections only when they have lines', () => {
    expect(renderConsolePane([], [])).toContain('console is empty');
    const both = renderConsolePane(['logged'], ['applied to item 1']);
    expect(both).toContain('script console');
    expect(both).toContain('activity');
    const activityOnly = renderConsolePane([], ['applied to item 1']);
    expect(activityOnly).not.toContain('script console');
  });
});
