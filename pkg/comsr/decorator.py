import warnings

from .schemabase import SchemaBase, resolve_references


def _describe(propschema):
    if '$ref' in propschema:
        return ":class:`{}`".format(propschema['$ref'].split('/')[-1])
    kind = propschema.get('type')
    if kind == 'array':
        items = propschema.get('items', {})
        if isinstance(items, list):
            # tuple validation: one schema per position
            return "Tuple({})".format(', '.join(map(_describe, items)))
        return "List({})".format(_describe(items))
    if 'enum' in propschema:
        return 'enum({})'.format(', '.join(map(repr, propschema['enum'])))
    if 'const' in propschema:
        return 'const({!r})'.format(propschema['const'])
    if isinstance(kind, list):
        return 'anyOf({})'.format(', '.join(kind))
    return kind or 'any'


def schemaclass(*args, docstring=True, property_map=True):
    """A decorator to add boilerplate to a document class

    This reads the _schema (and _rootschema) attributes of a SchemaBase class
    and adds, unless the class already defines them:

    - ``_property_names``, the schema's property names, so attribute
      assignment writes through to the document
    - a ``__doc__`` docstring listing the properties and their types

    A simple invocation adds both:

        @schemaclass
        class MyDocument(SchemaBase):
            _schema = {...}

    Optionally, you can invoke schemaclass with arguments to turn off
    some of the added behaviors:

        @schemaclass(docstring=False)
        class MyDocument(SchemaBase):
            _schema = {...}
    """
    def _decorator(cls, docstring=docstring, property_map=property_map):
        if not (isinstance(cls, type) and issubclass(cls, SchemaBase)):
            warnings.warn("class is not an instance of SchemaBase.")

        schema = resolve_references(cls._schema, cls._rootschema or cls._schema)
        properties = schema.get('properties', {})
        required = set(schema.get('required', ()))

        if property_map and '_property_names' not in cls.__dict__ and properties:
            cls._property_names = tuple(properties)

        if docstring and not cls.__doc__:
            lines = ["{} document wrapper".format(cls.__name__)]
            if schema.get('description'):
                lines += ['', schema['description']]
            if properties:
                lines += ['', 'Attributes', '----------']
                for name in sorted(properties, key=lambda p: (p not in required, p)):
                    propschema = properties[name]
                    lines.append("{} : {}".format(name, _describe(propschema)))
                    if propschema.get('description'):
                        lines.append("    {}".format(propschema['description']))
            cls.__doc__ = '\n'.join(lines)
        return cls

    if len(args) == 0:
        return _decorator
    elif len(args) == 1:
        return _decorator(args[0])
    else:
        raise ValueError("optional arguments to schemaclass must be "
                         "passed by keyword")
