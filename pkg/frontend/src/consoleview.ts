// Console pane rendering: plain log lines stay plain, lines that lead
// with a known error class get the error style.

const ERROR_CLASSES = [
  'ParseError',
  'UnsupportedApi',
  'BudgetExceeded',
  'TypeMismatch',
  'StateOverflow',
  'ArityMismatch',
  'NoCodeBlock',
  'UnterminatedFence',
  'NothingToApply',
  'Timeout',
  'Transport',
  'ProviderStatus',
  'MissingFixture',
  'MissingKey',
];

const ERROR_LEAD = new RegExp(`^(?:${ERROR_CLASSES.join('|')})\\b`);

export function isErrorLine(line: string): boolean {
  return ERROR_LEAD.test(line);
}

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}

export function renderLines(lines: string[]): string {
  return lines
    .map((line) => {
      const cls = isErrorLine(line) ? 'line error' : 'line';
      return `<div class="${cls}">${escapeHtml(line)}</div>`;
    })
    .join('');
}

export function renderConsolePane(scriptConsole: string[], activity: string[]): string {
  const parts: string[] = [];
  if (scriptConsole.length > 0) {
    parts.push('<div class="console-section">script console</div>');
    parts.push(renderLines(scriptConsole));
  }
  if (activity.length > 0) {
    parts.push('<div class="console-section">activity</div>');
    parts.push(renderLines(activity));
  }
  if (parts.length === 0) {
    return '<div class="line muted">console is empty</div>';
  }
  return parts.join('');
}
