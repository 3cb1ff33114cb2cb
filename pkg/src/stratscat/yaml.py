import yaml

from .exceptions import ParseError


def read_text(file_name):
    with open(file_name, "r") as fp:
        return fp.read()


def load_mapping(text, source="<config>"):
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        line = mark.line + 1 if mark is not None else None
        problem = getattr(exc, "problem", None) or str(exc)
        raise ParseError("{} in {}".format(problem, source), line=line)

    if data is None:
        return {}
    elif not isinstance(data, dict):
        raise ParseError("YAML content of {} is not a dictionary".format(source))

    return data


def key_line(text, path):
    """
    1-based line of the deepest key of ``path`` (a sequence of mapping keys
    and list indices) found in ``text``, or None.
    """
    try:
        node = yaml.compose(text)
    except yaml.YAMLError:
        return None
    line = None
    for part in path:
        if isinstance(node, yaml.MappingNode):
            for key, value in node.value:
                if key.value == str(part):
                    line = key.start_mark.line + 1
                    node = value
                    break
        elif isinstance(node, yaml.SequenceNode) and isinstance(part, int):
            if 0 <= part < len(node.value):
                node = node.value[part]
                line = node.start_mark.line + 1
    return line


def dump_document(data, fp=None):
    return yaml.safe_dump(
        data,
        fp,
        default_flow_style=False,
        allow_unicode=True,
        width=10000,
        sort_keys=False,
    )
