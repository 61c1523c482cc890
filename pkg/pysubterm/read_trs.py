'''
Reader for the TPDB legacy ``.trs`` format.

Only plain first-order systems are accepted: ``(VAR ...)`` and
``(RULES ...)`` blocks, with ``(COMMENT ...)`` blocks skipped. Theories,
strategies, conditional and relative rules are rejected.

'''

import bisect
import logging
import re
from collections import namedtuple

from .lookup import (COMMENT_BLOCK, MAX_TERM_DEPTH, RULES_BLOCK,
                     UNSUPPORTED_BLOCKS, VAR_BLOCK)
from .terms import TRS, App, Rule, Symbol, Var, is_var, variables


logger = logging.getLogger(__name__)

Token = namedtuple('Token', ['kind', 'text', 'line', 'column'])

TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<arrow>->=?)
  | (?P<equation>==)
  | (?P<bar>\|)
  | (?P<lpar>\()
  | (?P<rpar>\))
  | (?P<comma>,)
  | (?P<ident>(?:[A-Za-z0-9_'+*/.!]|-(?!>))+)
""", re.VERBOSE)

COMMENT_RE = re.compile(r'\(\s*{0}\b'.format(COMMENT_BLOCK))


class TRSFormatError(ValueError):
    """A ``.trs`` input that cannot be turned into a TRS."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = '{0} (line {1}, column {2})'.format(message, line,
                                                          column)
        super().__init__(message)


class TRSSyntaxError(TRSFormatError):
    pass


class ArityError(TRSFormatError):
    pass


class VariableLhsError(TRSFormatError):
    pass


class ExtraVariableError(TRSFormatError):
    pass


class UnsupportedFormatError(TRSFormatError):
    pass


class NestingError(TRSFormatError):
    pass


class _Positions(object):
    """Maps character offsets to 1-based line and column numbers."""

    def __init__(self, text):
        self.starts = [0] + [m.end() for m in re.finditer('\n', text)]

    def __call__(self, offset):
        line = bisect.bisect_right(self.starts, offset)
        return line, offset - self.starts[line - 1] + 1


def _blank_comments(text, positions):
    """Replace top-level COMMENT blocks by spaces, keeping newlines."""
    chars = list(text)
    depth = 0
    i = 0
    while i < len(text):
        char = text[i]
        if char == '(' and depth == 0 and COMMENT_RE.match(text, i):
            start = i
            nesting = 0
            while i < len(text):
                if text[i] == '(':
                    nesting += 1
                elif text[i] == ')':
                    nesting -= 1
                    if nesting == 0:
                        break
                i += 1
            else:
                raise TRSSyntaxError('Unterminated COMMENT block',
                                     *positions(start))
            for j in range(start, i + 1):
                if chars[j] != '\n':
                    chars[j] = ' '
        elif char == '(':
            depth += 1
        elif char == ')':
            depth = max(depth - 1, 0)
        i += 1
    return ''.join(chars)


def tokenize(text):
    """
    Split ``.trs`` text into tokens, comments removed.

    :param str text: file contents
    :return: tokens with their line and column
    :rtype: list of Token

    """
    positions = _Positions(text)
    text = _blank_comments(text, positions)
    tokens = []
    offset = 0
    while offset < len(text):
        match = TOKEN_RE.match(text, offset)
        if match is None:
            msg = 'Unexpected character {0!r}'.format
            raise TRSSyntaxError(msg(text[offset]), *positions(offset))
        if match.lastgroup != 'ws':
            tokens.append(Token(match.lastgroup, match.group(),
                                *positions(offset)))
        offset = match.end()
    return tokens


class _Parser(object):

    def __init__(self, tokens):
        self.tokens = tokens
        self.index = 0
        self.variables = set()
        self.arities = {}

    def peek(self):
        if self.index < len(self.tokens):
            return self.tokens[self.index]
        return None

    def advance(self):
        token = self.peek()
        if token is None:
            last = self.tokens[-1] if self.tokens else None
            raise TRSSyntaxError('Unexpected end of input',
                                 *(last[2:] if last else (1, 1)))
        self.index += 1
        return token

    def expect(self, kind):
        token = self.advance()
        if token.kind != kind:
            msg = 'Expected {0} but found {1!r}'.format
            raise TRSSyntaxError(msg(kind, token.text), token.line,
                                 token.column)
        return token

    def blocks(self):
        """Split the token stream into (name token, body tokens) blocks."""
        found = []
        while self.peek() is not None:
            self.expect('lpar')
            name = self.expect('ident')
            body = []
            depth = 1
            while True:
                token = self.advance()
                if token.kind == 'lpar':
                    depth += 1
                elif token.kind == 'rpar':
                    depth -= 1
                    if depth == 0:
                        break
                body.append(token)
            found.append((name, body))
        return found

    def term(self, depth=1):
        head = self.expect('ident')
        if depth > MAX_TERM_DEPTH:
            msg = 'Term nested deeper than {0} levels'.format
            raise NestingError(msg(MAX_TERM_DEPTH), head.line, head.column)
        following = self.peek()
        has_args = following is not None and following.kind == 'lpar'
        if head.text in self.variables:
            if has_args:
                msg = 'Variable {0} applied to arguments'.format
                raise TRSSyntaxError(msg(head.text), head.line, head.column)
            return Var(head.text)
        args = []
        if has_args:
            self.advance()
            if self.peek() is not None and self.peek().kind == 'rpar':
                self.advance()
            else:
                args.append(self.term(depth + 1))
                while True:
                    token = self.advance()
                    if token.kind == 'rpar':
                        break
                    if token.kind != 'comma':
                        msg = 'Expected , or ) but found {0!r}'.format
                        raise TRSSyntaxError(msg(token.text), token.line,
                                             token.column)
                    args.append(self.term(depth + 1))
        arity = self.arities.setdefault(head.text, len(args))
        if arity != len(args):
            msg = 'Symbol {0} used with arity {1} and {2}'.format
            raise ArityError(msg(head.text, arity, len(args)), head.line,
                             head.column)
        return App(Symbol(head.text, arity), tuple(args))

    def rule(self):
        start = self.peek()
        lhs = self.term()
        arrow = self.advance()
        if arrow.kind == 'arrow' and arrow.text == '->=':
            raise UnsupportedFormatError('Relative rules are not supported',
                                         arrow.line, arrow.column)
        if arrow.kind != 'arrow':
            msg = 'Expected -> but found {0!r}'.format
            raise TRSSyntaxError(msg(arrow.text), arrow.line, arrow.column)
        rhs = self.term()
        following = self.peek()
        if following is not None and following.kind in ('bar', 'equation'):
            raise UnsupportedFormatError('Conditional rules are not supported',
                                         following.line, following.column)
        if is_var(lhs):
            msg = 'Left-hand side {0} is a variable'.format
            raise VariableLhsError(msg(lhs.name), start.line, start.column)
        extra = variables(rhs) - variables(lhs)
        if extra:
            msg = 'Variables {0} occur only in the right-hand side'.format
            names = ', '.join(sorted(v.name for v in extra))
            raise ExtraVariableError(msg(names), start.line, start.column)
        return Rule(lhs, rhs)

    def rules(self, body):
        outer_tokens, outer_index = self.tokens, self.index
        self.tokens, self.index = body, 0
        try:
            parsed = []
            while self.peek() is not None:
                parsed.append(self.rule())
        finally:
            self.tokens, self.index = outer_tokens, outer_index
        return parsed


def parse_trs(text):
    """
    Parse a TPDB legacy ``.trs`` document.

    Identifiers declared in a VAR block are variables, everything else is
    a function symbol whose arity is inferred from its uses. ``0`` and
    ``0()`` denote the same constant.

    :param str text: file contents
    :return: the rewrite system
    :rtype: TRS

    """
    parser = _Parser(tokenize(text))
    blocks = parser.blocks()
    rule_bodies = []
    for name, body in blocks:
        if name.text == VAR_BLOCK:
            for token in body:
                if token.kind != 'ident':
                    msg = 'Unexpected {0!r} in VAR block'.format
                    raise TRSSyntaxError(msg(token.text), token.line,
                                         token.column)
                parser.variables.add(token.text)
        elif name.text == RULES_BLOCK:
            rule_bodies.append(body)
        elif name.text in UNSUPPORTED_BLOCKS:
            msg = '{0} blocks are not supported'.format
            raise UnsupportedFormatError(msg(name.text), name.line,
                                         name.column)
        else:
            msg = 'Unknown block {0}'.format
            raise TRSSyntaxError(msg(name.text), name.line, name.column)
    rules = []
    for body in rule_bodies:
        rules.extend(parser.rules(body))
    logger.debug('parsed %d rules over %d symbols', len(rules),
                 len(parser.arities))
    return TRS(rules, variables=parser.variables)


def read_trs(path):
    """
    Read and parse a ``.trs`` file.

    :param str path: file name
    :return: the rewrite system
    :rtype: TRS

    """
    with open(path) as f:
        text = f.read()
    return parse_trs(text)


def parse_term(text, variables=()):
    """
    Parse a single term.

    :param str text: the term, e.g. ``'minus(s(x),0)'``
    :param variables: identifiers to read as variables
    :rtype: Var or App

    """
    parser = _Parser(tokenize(text))
    parser.variables.update(variables)
    term = parser.term()
    extra = parser.peek()
    if extra is not None:
        msg = 'Unexpected {0!r} after term'.format
        raise TRSSyntaxError(msg(extra.text), extra.line, extra.column)
    return term
