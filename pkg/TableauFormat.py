import logging
from typing import List, Optional

from TableauModel import Tableau, TableauInputError, TableauParseError

logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(levelname)s - %(threadName)s - %(message)s'
)
logger = logging.getLogger(__name__)


class TableauFormat:
    """Plain-text reader and writer for tableaux.

    The file format is a header line ``n s`` followed by ``n`` lines of ``n``
    letters separated by single spaces. For ``s <= 9`` a row may also be written
    as ``n`` adjacent digits. A headerless compact block (rows of digits only)
    is accepted too; its alphabet is the largest letter seen (at least 2) unless
    the caller passes ``alphabet``. Blank lines and ``#`` comments are ignored.
    """

    @staticmethod
    def parse(text: str, alphabet: Optional[int] = None) -> Tableau:
        """Parse a tableau from text.

        Args:
            text: File contents.
            alphabet: Alphabet size override for headerless input.

        Returns:
            Tableau: The parsed tableau.

        Raises:
            TableauParseError: With the 1-based line and column of the first fault.
        """
        lines = [(number, raw.split('#', 1)[0].rstrip())
                 for number, raw in enumerate(text.splitlines(), start=1)]
        lines = [(number, line) for number, line in lines if line.strip()]
        if not lines:
            logger.error("Empty tableau input")
            raise TableauParseError("empty input", line=1)

        first_number, first_line = lines[0]
        header = first_line.split()
        if len(header) == 2 and all(token.isdigit() for token in header):
            n, s = int(header[0]), int(header[1])
            if n < 1 or s < 1:
                raise TableauParseError(f"header needs positive n and s, got '{first_line.strip()}'",
                                        line=first_number, column=1)
            body = lines[1:]
        else:
            body = lines
            n, s = len(body), None

        if len(body) != n:
            last = body[-1][0] if body else first_number
            logger.error("Expected %d rows, found %d", n, len(body))
            raise TableauParseError(f"expected {n} rows, found {len(body)}", line=last + (0 if body else 1))

        rows: List[List[int]] = []
        for index, (number, line) in enumerate(body, start=1):
            rows.append(TableauFormat._parse_row(line, number, index, n))

        if s is None:
            s = alphabet if alphabet is not None else max(2, max(max(row) for row in rows))
        for row_number, (number, line) in zip(range(n), body):
            for column, letter in enumerate(rows[row_number], start=1):
                if not 1 <= letter <= s:
                    raise TableauParseError(f"letter {letter} outside 1..{s} in row {row_number + 1}",
                                            line=number, column=TableauFormat._column_of(line, column))
        return Tableau(n, s, tuple(tuple(row) for row in rows))

    @staticmethod
    def _parse_row(line: str, number: int, index: int, n: int) -> List[int]:
        stripped = line.strip()
        tokens = stripped.split()
        if len(tokens) == 1 and len(stripped) == n and n > 1 and stripped.isdigit():
            tokens = list(stripped)
        if len(tokens) != n:
            logger.error("Row %d has %d entries, expected %d", index, len(tokens), n)
            raise TableauParseError(f"row {index} has {len(tokens)} entries, expected {n}",
                                    line=number, column=1)
        row = []
        for position, token in enumerate(tokens, start=1):
            if not token.isdigit():
                raise TableauParseError(f"row {index}: '{token}' is not a letter",
                                        line=number, column=TableauFormat._column_of(line, position))
            row.append(int(token))
        return row

    @staticmethod
    def _column_of(line: str, position: int) -> int:
        """1-based character column of the position-th letter of a row line."""
        tokens = line.split()
        if len(tokens) == 1:
            return len(line) - len(line.lstrip()) + position
        offset = 0
        for count, token in enumerate(tokens, start=1):
            offset = line.index(token, offset)
            if count == position:
                return offset + 1
            offset += len(token)
        return 1

    @staticmethod
    def parse_inline(text: str, alphabet: Optional[int] = None) -> Tableau:
        """Parse the inline form used on the command line: rows separated by '/'.

        Rows are digit strings (``11/22``) or comma-separated letters (``1,10/10,1``).
        """
        if not text or not text.strip():
            raise TableauInputError("empty inline tableau")
        rows = []
        for index, chunk in enumerate(text.strip().split('/'), start=1):
            parts = chunk.split(',') if ',' in chunk else list(chunk)
            try:
                rows.append([int(part) for part in parts])
            except ValueError:
                raise TableauParseError(f"row {index} '{chunk}' is not a list of letters", line=1,
                                        column=text.find(chunk) + 1)
        return Tableau.from_rows(rows, alphabet)

    @staticmethod
    def read(path: str, alphabet: Optional[int] = None) -> Tableau:
        try:
            with open(path, 'r') as handle:
                text = handle.read()
        except OSError as e:
            logger.error("Cannot read tableau file %s: %s", path, e)
            raise TableauInputError(f"cannot read {path}: {e}") from e
        return TableauFormat.parse(text, alphabet)

    @staticmethod
    def format(tableau: Tableau, compact: bool = False) -> str:
        """Render ``tableau`` in the file format; ``parse(format(T)) == T``."""
        separator = "" if compact and tableau.s <= 9 else " "
        lines = [f"{tableau.n} {tableau.s}"]
        lines.extend(separator.join(str(letter) for letter in row) for row in tableau.rows)
        return "\n".join(lines) + "\n"

    @staticmethod
    def write(tableau: Tableau, path: str, compact: bool = False) -> None:
        with open(path, 'w') as handle:
            handle.write(TableauFormat.format(tableau, compact))
        logger.debug("Wrote %dx%d tableau to %s", tableau.n, tableau.n, path)
