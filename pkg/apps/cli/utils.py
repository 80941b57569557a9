import csv
import io
import json

from pucci import settings

SPECTRUM_HEADERS = ('sign', 'k', 'beta', 'mu', 'dw_at_beta')
BRANCH_HEADERS = ('alpha', 'mu', 'sup_norm', 'nodal_count', 'boundary_derivative')
EIGENFUNCTION_HEADERS = ('r', 'value')


def format_value(value):
    """Floats with 17 significant digits (round-trip safe), everything else via str."""
    if isinstance(value, float):
        return format(value, f'.{settings.FLOAT_DIGITS}g')
    return str(value)


def render_csv(headers, rows, preamble=(), trailer=()):
    """Header line, one line per row; preamble and trailer become ``# key=value`` lines."""
    buffer = io.StringIO()
    for key, value in preamble:
        buffer.write(f'# {key}={format_value(value)}\n')
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(headers)
    for row in rows:
        writer.writerow([format_value(row[name]) for name in headers])
    for key, value in trailer:
        buffer.write(f'# {key}={format_value(value)}\n')
    return buffer.getvalue()


def render_json(meta, rows):
    return json.dumps({'meta': meta, 'rows': list(rows)}, indent=2) + '\n'


def render(config, headers, rows, meta, preamble=(), trailer=()):
    if config.output_format == 'json':
        return render_json(meta, rows)
    return render_csv(headers, rows, preamble, trailer)


def emit(text, out, stdout):
    """Write ``text`` to the file ``out`` or, when it is empty, to the command's stdout."""
    if out:
        with open(out, 'w', newline='') as f:
            f.write(text)
    else:
        stdout.write(text, ending='')

