//! Canonical XML output.
//!
//! Rules: UTF-8, LF line endings, no XML declaration, one element per line
//! indented by two spaces per level, attributes sorted by qualified name,
//! text-only elements written on one line with their text trimmed, empty
//! elements self-closed, and a trailing newline after the root. Opaque
//! payloads are written verbatim.

pub fn escape_text(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            c => out.push(c),
        }
    }
    out
}

pub fn escape_attr(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\t' => out.push_str("&#9;"),
            '\n' => out.push_str("&#10;"),
            '\r' => out.push_str("&#13;"),
            c => out.push(c),
        }
    }
    out
}

#[derive(Debug, Default)]
pub struct Writer {
    out: String,
    depth: usize,
}

impl Writer {
    pub fn new() -> Self {
        Writer::default()
    }

    /// A writer whose output starts at the given nesting depth, for
    /// building a body before deciding how to wrap it.
    pub fn nested(depth: usize) -> Self {
        Writer {
            out: String::new(),
            depth,
        }
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Appends output produced by a nested writer.
    pub fn append(&mut self, body: &str) {
        self.out.push_str(body);
    }

    fn indent(&mut self) {
        for _ in 0..self.depth {
            self.out.push_str("  ");
        }
    }

    fn start_tag(&mut self, tag: &str, attrs: &[(&str, &str)]) {
        let mut sorted: Vec<&(&str, &str)> = attrs.iter().collect();
        sorted.sort_by(|a, b| a.0.cmp(b.0));
        self.out.push('<');
        self.out.push_str(tag);
        for (k, v) in sorted {
            self.out.push(' ');
            self.out.push_str(k);
            self.out.push_str("=\"");
            self.out.push_str(&escape_attr(v));
            self.out.push('"');
        }
    }

    pub fn open(&mut self, tag: &str, attrs: &[(&str, &str)]) {
        self.indent();
        self.start_tag(tag, attrs);
        self.out.push_str(">\n");
        self.depth += 1;
    }

    pub fn close(&mut self, tag: &str) {
        self.depth -= 1;
        self.indent();
        self.out.push_str("</");
        self.out.push_str(tag);
        self.out.push_str(">\n");
    }

    pub fn empty(&mut self, tag: &str, attrs: &[(&str, &str)]) {
        self.indent();
        self.start_tag(tag, attrs);
        self.out.push_str("/>\n");
    }

    /// Text-only element. Leading and trailing whitespace is dropped.
    pub fn leaf(&mut self, tag: &str, attrs: &[(&str, &str)], text: &str) {
        let text = text.trim();
        if text.is_empty() {
            self.empty(tag, attrs);
            return;
        }
        self.indent();
        self.start_tag(tag, attrs);
        self.out.push('>');
        self.out.push_str(&escape_text(text));
        self.out.push_str("</");
        self.out.push_str(tag);
        self.out.push_str(">\n");
    }

    /// Element whose content is an opaque payload, written verbatim.
    pub fn raw_content(&mut self, tag: &str, attrs: &[(&str, &str)], payload: &str) {
        let payload = payload.trim();
        if payload.is_empty() {
            self.empty(tag, attrs);
            return;
        }
        self.indent();
        self.start_tag(tag, attrs);
        self.out.push('>');
        self.out.push_str(payload);
        self.out.push_str("</");
        self.out.push_str(tag);
        self.out.push_str(">\n");
    }

    /// A whole element carried verbatim.
    pub fn raw_element(&mut self, source: &str) {
        self.indent();
        self.out.push_str(source.trim());
        self.out.push('\n');
    }

    pub fn finish(self) -> String {
        self.out
    }
}
