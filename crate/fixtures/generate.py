#!/usr/bin/env python3
"""Writes the five-language fixture KB, corpora, property catalog, templates
and vocabulary into this directory.

Run from anywhere: python3 fixtures/generate.py
Output is deterministic; rerunning must not change any file.
"""

import json
import os

HERE = os.path.dirname(os.path.abspath(__file__))
LANGS = ["en", "de", "es", "fr", "it"]

MONTHS = {
    "en": "January February March April May June July August September October November December".split(),
    "de": "Januar Februar März April Mai Juni Juli August September Oktober November Dezember".split(),
    "es": "enero febrero marzo abril mayo junio julio agosto septiembre octubre noviembre diciembre".split(),
    "fr": "janvier février mars avril mai juin juillet août septembre octobre novembre décembre".split(),
    "it": "gennaio febbraio marzo aprile maggio giugno luglio agosto settembre ottobre novembre dicembre".split(),
}

DE_DATE_PREP = {"day": "am ", "month": "im ", "year": ""}

AND = {"en": "and", "de": "und", "es": "y", "fr": "et", "it": "e"}

MALE, FEMALE = "Q6581097", "Q6581072"
COUNTRY, CITY, RIVER, HUMAN, NOVEL = "Q6256", "Q515", "Q4022", "Q5", "Q7725634"
METRE = "Q11573"


def same(label, **over):
    out = {lang: label for lang in LANGS}
    out.update(over)
    return out


COUNTRIES = [
    ("Q155", same("Brazil", de="Brasilien", es="Brasil", fr="Brésil", it="Brasile"), "Q2844"),
    ("Q419", same("Peru", es="Perú", fr="Pérou", it="Perù"), "Q2868"),
    ("Q739", same("Colombia", de="Kolumbien", fr="Colombie"), "Q2841"),
    ("Q717", same("Venezuela"), "Q1533"),
    ("Q142", same("France", de="Frankreich", es="Francia", it="Francia"), "Q90"),
    ("Q183", same("Germany", de="Deutschland", es="Alemania", fr="Allemagne", it="Germania"), "Q64"),
    ("Q38", same("Italy", de="Italien", es="Italia", fr="Italie", it="Italia"), "Q220"),
    ("Q29", same("Spain", de="Spanien", es="España", fr="Espagne", it="Spagna"), "Q2807"),
    ("Q145", same("United Kingdom", de="Vereinigtes Königreich", es="Reino Unido", fr="Royaume-Uni", it="Regno Unito"), "Q84"),
    ("Q414", same("Argentina", de="Argentinien", fr="Argentine"), "Q1486"),
    ("Q298", same("Chile", fr="Chili", it="Cile"), "Q2887"),
    ("Q45", same("Portugal", it="Portogallo"), "Q597"),
    ("Q40", same("Austria", de="Österreich", fr="Autriche"), "Q1741"),
    ("Q39", same("Switzerland", de="Schweiz", es="Suiza", fr="Suisse", it="Svizzera"), "Q70"),
]

# qid, labels, country, population
CITIES = [
    ("Q90", same("Paris", it="Parigi"), "Q142", 2165423),
    ("Q64", same("Berlin", es="Berlín", it="Berlino"), "Q183", 3645000),
    ("Q220", same("Rome", de="Rom", es="Roma", it="Roma"), "Q38", 2873000),
    ("Q2807", same("Madrid"), "Q29", 3223000),
    ("Q84", same("London", es="Londres", fr="Londres", it="Londra"), "Q145", 8982000),
    ("Q2868", same("Lima"), "Q419", 9751000),
    ("Q2841", same("Bogotá", it="Bogotà"), "Q739", None),
    ("Q1533", same("Caracas"), "Q717", None),
    ("Q2844", same("Brasília", es="Brasilia", fr="Brasilia", it="Brasilia"), "Q155", None),
    ("Q1741", same("Vienna", de="Wien", es="Viena", fr="Vienne"), "Q40", 1897000),
    ("Q597", same("Lisbon", de="Lissabon", es="Lisboa", fr="Lisbonne", it="Lisbona"), "Q45", None),
    ("Q1486", same("Buenos Aires"), "Q414", None),
    ("Q2887", same("Santiago", es="Santiago de Chile"), "Q298", None),
    ("Q70", same("Bern", es="Berna", fr="Berne", it="Berna"), "Q39", None),
    ("Q2044", same("Florence", de="Florenz", es="Florencia", it="Firenze"), "Q38", None),
    ("Q1794", same("Frankfurt", es="Fráncfort", fr="Francfort", it="Francoforte"), "Q183", None),
    ("Q490", same("Milan", de="Mailand", es="Milán", it="Milano"), "Q38", 1352000),
    ("Q1492", same("Barcelona", fr="Barcelone", it="Barcellona"), "Q29", None),
    ("Q456", same("Lyon", it="Lione"), "Q142", None),
]

RIVERS = [
    ("Q584", same("Rhine", de="Rhein", es="Rin", fr="Rhin", it="Reno"), ["Q39", "Q40", "Q183", "Q142"]),
    ("Q1471", same("Seine", it="Senna"), ["Q142"]),
    ("Q13712", same("Tiber", es="Tíber", fr="Tibre", it="Tevere"), ["Q38"]),
    ("Q1653", same("Danube", de="Donau", es="Danubio", it="Danubio"), ["Q183", "Q40"]),
    ("Q19686", same("Thames", de="Themse", es="Támesis", fr="Tamise", it="Tamigi"), ["Q145"]),
    ("Q14300", same("Ebro", fr="Èbre"), ["Q29"]),
    ("Q643", same("Po", fr="Pô"), ["Q38"]),
    ("Q14294", same("Tagus", de="Tajo", es="Tajo", fr="Tage", it="Tago"), ["Q29", "Q45"]),
    ("Q131756", same("Orinoco", fr="Orénoque"), ["Q717", "Q739"]),
]

# qid, label, gender statement (None = absent), gender for text, occupation,
# citizenship, birthplace, birth date, precision, pronoun sentence
PEOPLE = [
    ("Q1067", "Dante Alighieri", MALE, "m", "writer", "Q38", "Q2044", "1265", "year", True),
    ("Q535", "Victor Hugo", MALE, "m", "writer", "Q142", None, "1802-02-26", "day", True),
    ("Q5879", "Johann Wolfgang von Goethe", MALE, "m", "writer", "Q183", "Q1794", "1749-08-28", "day", True),
    ("Q5682", "Miguel de Cervantes", MALE, "m", "writer", "Q29", None, "1547-09-29", "day", True),
    ("Q7186", "Marie Curie", FEMALE, "f", "physicist", "Q142", None, "1867-11-07", "day", True),
    ("Q909", "Jorge Luis Borges", MALE, "m", "writer", "Q414", "Q1486", "1899-08-24", "day", True),
    ("Q272172", "Isabel Allende", FEMALE, "f", "writer", "Q298", "Q2868", "1942-08-02", "day", True),
    ("Q39803", "Mario Vargas Llosa", MALE, "m", "writer", "Q419", None, "1936-03-28", "day", True),
    ("Q173481", "Fernando Pessoa", MALE, "m", "writer", "Q45", "Q597", "1888-06-13", "day", True),
    ("Q36322", "Jane Austen", FEMALE, "f", "writer", "Q145", None, "1775-12-16", "day", True),
    ("Q7197", "Simone de Beauvoir", FEMALE, "f", "writer", "Q142", "Q90", "1908-01-09", "day", True),
    ("Q7259", "Ada Lovelace", FEMALE, "f", "mathematician", "Q145", "Q84", "1815-12-10", "day", True),
    ("Q186335", "Grazia Deledda", None, "f", "writer", "Q38", None, "1871-09", "month", True),
    ("Q5878", "Gabriel García Márquez", MALE, "m", "writer", "Q739", None, "1927-03-06", "day", True),
    ("Q254", "Wolfgang Amadeus Mozart", None, "m", "composer", "Q40", None, "1756-01-27", "day", False),
    ("Q187019", "E. M. Forster", MALE, "m", "writer", "Q145", "Q84", "1879-01-01", "day", True),
]

BOOKS = [
    ("Q480", same("Don Quixote", de="Don Quijote", es="Don Quijote de la Mancha", fr="Don Quichotte", it="Don Chisciotte della Mancia"), "Q5682"),
    ("Q1473", dict(en="Divine Comedy", de="Göttliche Komödie", es="Divina comedia", fr="La Divine Comédie", it="Divina Commedia"), "Q1067"),
    ("Q180736", same("Les Misérables", es="Los miserables", it="I miserabili"), "Q535"),
    ("Q131149", same("Faust"), "Q5879"),
    ("Q178869", dict(en="One Hundred Years of Solitude", de="Hundert Jahre Einsamkeit", es="Cien años de soledad", fr="Cent ans de solitude", it="Cent'anni di solitudine"), "Q5878"),
    ("Q170583", dict(en="Pride and Prejudice", de="Stolz und Vorurteil", es="Orgullo y prejuicio", fr="Orgueil et Préjugés", it="Orgoglio e pregiudizio"), "Q36322"),
    ("Q1214498", dict(en="The House of the Spirits", de="Das Geisterhaus", es="La casa de los espíritus", fr="La Maison aux esprits", it="La casa degli spiriti"), "Q272172"),
    ("Q7200", dict(en="The Second Sex", de="Das andere Geschlecht", es="El segundo sexo", fr="Le Deuxième Sexe", it="Il secondo sesso"), "Q7197"),
    # no Italian label, but an Italian page: counted as unlabeled
    ("Q1189010", dict(en="Ficciones", de="Fiktionen", es="Ficciones", fr="Fictions"), "Q909"),
    ("Q207528", dict(en="A Passage to India", de="Auf der Suche nach Indien", es="Pasaje a la India", fr="La Route des Indes", it="Passaggio in India"), "Q187019"),
]

OCCUPATIONS = {
    "writer": dict(en=("writer", "writer"), de=("Schriftsteller", "Schriftstellerin"), es=("escritor", "escritora"),
                   fr=("écrivain", "écrivaine"), it=("uno scrittore", "una scrittrice")),
    "physicist": dict(en=("physicist", "physicist"), de=("Physiker", "Physikerin"), es=("físico", "física"),
                      fr=("physicien", "physicienne"), it=("un fisico", "una fisica")),
    "mathematician": dict(en=("mathematician", "mathematician"), de=("Mathematiker", "Mathematikerin"),
                          es=("matemático", "matemática"), fr=("mathématicien", "mathématicienne"),
                          it=("un matematico", "una matematica")),
    "composer": dict(en=("composer", "composer"), de=("Komponist", "Komponistin"), es=("compositor", "compositora"),
                     fr=("compositeur", "compositrice"), it=("un compositore", "una compositrice")),
}

AMAZON_LABELS = dict(en="Amazon", de="Amazonas", es="Amazonas", fr="Amazone", it="Rio delle Amazzoni")
AMAZON_ALIASES = dict(en=["Amazon River"], fr=["Amazonas"])
AMAZON_PAGES = dict(
    en="The Amazon River in South America is the largest river by discharge volume of water in the world. "
       "The Amazon proper runs mostly through Brazil and Peru, and is part of the border between them. "
       "The river was first explored by Europeans in the sixteenth century.",
    de="Der Amazonas ist der wasserreichste Strom der Erde. "
       "Der Fluss Amazonas gab seinerseits dem Amazonasbecken sowie mehreren gleichnamigen Verwaltungseinheiten "
       "in Brasilien, Venezuela, Kolumbien seinen Namen. "
       "Seine Quellen liegen in den Anden von Peru.",
    es="El Amazonas es el río más caudaloso del mundo. "
       "El río Amazonas es un río de América del Sur, que atraviesa Perú, Colombia y Brasil.",
    fr="L'Amazone est un fleuve d'Amérique du Sud. "
       "Le fleuve prend alors le nom d'Amazonas au Pérou et en Colombie, puis celui de rio Solimões "
       "en entrant au Brésil au niveau de Tabatinga.",
    it="Il Rio delle Amazzoni è un fiume dell'America Meridionale che attraversa Perù, Colombia e Brasile. "
       "È il fiume più lungo del mondo.",
)


def render_date(date, precision, lang):
    parts = date.split("-")
    year = parts[0]
    if precision == "year":
        return year
    month = MONTHS[lang][int(parts[1]) - 1]
    if precision == "month":
        return f"{month} de {year}" if lang == "es" else f"{month} {year}"
    day = str(int(parts[2]))
    if day == "1" and lang == "fr":
        day = "1er"
    elif day == "1" and lang == "it":
        day = "1º"
    return {
        "en": f"{day} {month} {year}",
        "de": f"{day}. {month} {year}",
        "es": f"{day} de {month} de {year}",
        "fr": f"{day} {month} {year}",
        "it": f"{day} {month} {year}",
    }[lang]


def join(items, lang):
    if len(items) == 1:
        return items[0]
    return ", ".join(items[:-1]) + f" {AND[lang]} " + items[-1]


def entity(qid, labels, statements, aliases=None):
    rec = {"qid": qid, "labels": labels}
    if aliases:
        rec["aliases"] = aliases
    rec["statements"] = statements
    return rec


def ent(pid, qid):
    return {"pid": pid, "type": "entity", "value": qid}


def build():
    label = {}
    for qid, labels, _ in COUNTRIES:
        label[qid] = labels
    for qid, labels, *_ in CITIES:
        label[qid] = labels
    for qid, name, *_ in PEOPLE:
        label[qid] = same(name)

    kb = []
    pages = {lang: [] for lang in LANGS}

    def page(qid, lang, text, title=None):
        pages[lang].append({"qid": qid, "language": lang, "title": title or label.get(qid, {}).get(lang, qid), "text": text})

    kb.append(entity("Q3783", AMAZON_LABELS,
                     [ent("P31", RIVER)] + [ent("P17", c) for c in ["Q155", "Q419", "Q739", "Q717"]],
                     AMAZON_ALIASES))
    for lang in LANGS:
        page("Q3783", lang, AMAZON_PAGES[lang], AMAZON_LABELS[lang])

    for qid, labels, capital in COUNTRIES:
        kb.append(entity(qid, labels, [ent("P31", COUNTRY), ent("P36", capital)]))
        for lang in LANGS:
            k, c = labels[lang], label[capital][lang]
            text = {
                "en": f"{k} is a sovereign state. The capital of {k} is {c}.",
                "de": f"{k} ist ein souveräner Staat. Die Hauptstadt von {k} ist {c}.",
                "es": f"{k} es un país soberano. La capital de {k} es {c}.",
                "fr": f"{k} est un État souverain. La capitale de {k} est {c}.",
                "it": f"{k} è uno stato sovrano. La capitale di {k} è {c}.",
            }[lang]
            page(qid, lang, text)

    for qid, labels, country, population in CITIES:
        statements = [ent("P31", CITY), ent("P17", country)]
        if population:
            statements.append({"pid": "P1082", "type": "quantity", "value": {"amount": population}})
        if qid == "Q2841":
            statements.append({"pid": "P2044", "type": "quantity", "value": {"amount": 2640, "unit": METRE}})
        if qid == "Q90":
            statements.append({"pid": "P1449", "type": "text", "value": "City of Light"})
        kb.append(entity(qid, labels, statements))
        for lang in LANGS:
            c, k = labels[lang], label[country][lang]
            sentences = [{
                "en": f"{c} is a city in {k}.",
                "de": f"{c} ist eine Stadt in {k}.",
                "es": f"{c} es una ciudad de {k}.",
                "fr": f"{c} est une ville de {k}.",
                "it": f"{c} è una città di {k}.",
            }[lang]]
            if population:
                sentences.append({
                    "en": f"{c} has a population of {population}.",
                    "de": f"{c} hat {population} Einwohner.",
                    "es": f"{c} tiene {population} habitantes.",
                    "fr": f"{c} compte {population} habitants.",
                    "it": f"{c} ha {population} abitanti.",
                }[lang])
            if qid == "Q2841":
                sentences.append({
                    "en": f"{c} lies at an altitude of 2640 metres.",
                    "de": f"{c} liegt auf 2640 Meter Höhe.",
                    "es": f"{c} se encuentra a 2640 metros de altitud.",
                    "fr": f"{c} se trouve à 2640 mètres d'altitude.",
                    "it": f"{c} si trova a 2640 metri di altitudine.",
                }[lang])
            if qid == "Q90" and lang == "en":
                sentences.append("Paris is often called the City of Light.")
            page(qid, lang, " ".join(sentences))

    kb.append(entity(METRE, dict(en="metres", de="Meter", es="metros", fr="mètres", it="metri"), []))
    page(METRE, "en", "The metre is the base unit of length.", "Metre")

    for qid, labels, countries in RIVERS:
        kb.append(entity(qid, labels, [ent("P31", RIVER)] + [ent("P17", c) for c in countries]))
        for lang in LANGS:
            r = labels[lang]
            ks = join([label[c][lang] for c in countries], lang)
            text = {
                "en": f"The {r} is a major river. The {r} flows through {ks}.",
                "de": f"Der {r} ist ein großer Fluss. Der Fluss {r} fließt durch {ks}.",
                "es": f"El {r} es un gran río. El río {r} atraviesa {ks}.",
                "fr": f"Le {r} est un grand fleuve. Le fleuve {r} traverse {ks}.",
                "it": f"Il {r} è un grande fiume. Il fiume {r} attraversa {ks}.",
            }[lang]
            page(qid, lang, text, r)

    for qid, name, gender_stmt, g, occupation, country, birthplace, date, precision, pronoun in PEOPLE:
        statements = [ent("P31", HUMAN)]
        if gender_stmt:
            statements.append(ent("P21", gender_stmt))
        statements.append(ent("P27", country))
        if birthplace:
            statements.append(ent("P19", birthplace))
        statements.append({"pid": "P569", "type": "time", "value": {"time": date, "precision": precision}})
        kb.append(entity(qid, same(name), statements))
        fem = g == "f"
        for lang in LANGS:
            k = label[country][lang]
            occ = OCCUPATIONS[occupation][lang][1 if fem else 0]
            d = render_date(date, precision, lang)
            b = label[birthplace][lang] if birthplace else None
            first = {
                "en": f"{name} was a {occ} from {k}.",
                "de": f"{name} war {'eine' if fem else 'ein'} {occ} aus {k}.",
                "es": f"{name} fue {'una' if fem else 'un'} {occ} de {k}.",
                "fr": f"{name} était {'une' if fem else 'un'} {occ} originaire de {k}.",
                "it": f"{name} è {'stata' if fem else 'stato'} {occ} di {k}.",
            }[lang]
            on = precision == "day"
            born = {
                "en": f"{name} was born {'on' if on else 'in'} {d}" + (f" in {b}." if b else "."),
                "de": f"{name} wurde {DE_DATE_PREP[precision]}{d}" + (f" in {b}" if b else "") + " geboren.",
                "es": f"{name} nació {'el' if on else 'en'} {d}" + (f" en {b}." if b else "."),
                "fr": f"{name} est {'née' if fem else 'né'} {'le' if on else 'en'} {d}" + (f" à {b}." if b else "."),
                "it": f"{name} è {'nata' if fem else 'nato'} {'il' if on else 'nel'} {d}" + (f" a {b}." if b else "."),
            }[lang]
            sentences = [first, born]
            if pronoun:
                sentences.append({
                    "en": f"{'She' if fem else 'He'} is still widely read today.",
                    "de": f"{'Sie' if fem else 'Er'} wird bis heute viel gelesen.",
                    "es": f"{'Ella' if fem else 'Él'} sigue siendo muy {'leída' if fem else 'leído'} hoy.",
                    "fr": f"{'Elle' if fem else 'Il'} est encore très {'lue' if fem else 'lu'} aujourd'hui.",
                    "it": f"{'Lei' if fem else 'Lui'} è ancora molto {'letta' if fem else 'letto'} oggi.",
                }[lang])
            page(qid, lang, " ".join(sentences), name)

    for qid, labels, author in BOOKS:
        kb.append(entity(qid, labels, [ent("P31", NOVEL), ent("P50", author)]))
        for lang in LANGS:
            t = labels.get(lang, labels["en"])
            a = label[author][lang]
            text = {
                "en": f"{t} is a novel by {a}.",
                "de": f"{t} ist ein Roman von {a}.",
                "es": f"{t} es una novela de {a}.",
                "fr": f"{t} est un roman de {a}.",
                "it": f"{t} è un romanzo di {a}.",
            }[lang]
            page(qid, lang, text, t)

    return kb, pages


PROPERTIES = {
    "P17": dict(en="country", de="Staat", es="país", fr="pays", it="paese"),
    "P19": dict(en="place of birth", de="Geburtsort", es="lugar de nacimiento", fr="lieu de naissance", it="luogo di nascita"),
    "P27": dict(en="country of citizenship", de="Staatsangehörigkeit", es="país de nacionalidad", fr="pays de nationalité", it="cittadinanza"),
    "P36": dict(en="capital", de="Hauptstadt", es="capital", fr="capitale", it="capitale"),
    "P50": dict(en="author", de="Autor", es="autor", fr="auteur", it="autore"),
    "P569": dict(en="date of birth", de="Geburtsdatum", es="fecha de nacimiento", fr="date de naissance", it="data di nascita"),
    "P1082": dict(en="population", de="Einwohnerzahl", es="población", fr="population", it="popolazione"),
    "P1449": dict(en="nickname", de="Spitzname", es="apodo", fr="surnom", it="soprannome"),
    "P2044": dict(en="elevation above sea level", de="Höhe über dem Meeresspiegel", es="altitud", fr="altitude", it="altitudine"),
}

TEMPLATES = [
    ("P17", "en", "What country is {x} located in?"),
    ("P17", "en", "In which country is {x}?"),
    ("P17", "de", "In welchem land befindet man sich, wenn man {x} besucht?"),
    ("P17", "es", "¿En qué país se encuentra {art} {x}?"),
    ("P17", "fr", "Dans quel pays peux-tu trouver {x}?"),
    ("P17", "it", "Di quale nazione fa parte {art} {x}?"),
    ("P19", "en", "Where was {x} born?"),
    ("P19", "de", "Wo wurde {x} geboren?"),
    ("P19", "es", "¿Dónde ha {fill} {x}?"),
    ("P19", "fr", "Où est {fill} {x}?"),
    ("P19", "it", "Dove è {fill} {x}?"),
    ("P27", "en", "What is the nationality of {x}?"),
    ("P27", "en", "Which country is {x} a citizen of?"),
    ("P27", "de", "Welche Staatsangehörigkeit hat {x}?"),
    ("P27", "es", "¿De qué país es {x}?"),
    ("P27", "fr", "Quelle est la nationalité de {x}?"),
    ("P27", "it", "Qual è la nazionalità di {x}?"),
    ("P36", "en", "What is the capital of {x}?"),
    ("P36", "de", "Was ist die Hauptstadt von {x}?"),
    ("P36", "es", "¿Cuál es la capital de {x}?"),
    ("P36", "fr", "Quelle est la capitale de {x}?"),
    ("P36", "it", "Qual è la capitale di {x}?"),
    ("P50", "en", "Who wrote {x}?"),
    ("P50", "en", "Who is the author of {x}?"),
    ("P50", "de", "Wer schrieb {x}?"),
    ("P50", "es", "¿Quién escribió {x}?"),
    ("P50", "fr", "Qui a écrit {x}?"),
    ("P50", "it", "Chi ha scritto {x}?"),
    ("P569", "en", "When was {x} born?"),
    ("P569", "de", "Wann wurde {x} geboren?"),
    ("P569", "es", "¿Cuándo ha {fill} {x}?"),
    ("P569", "fr", "Quand est {fill} {x}?"),
    ("P569", "it", "Quando è {fill} {x}?"),
    ("P1082", "en", "What is the population of {x}?"),
    ("P1082", "de", "Wie viele Einwohner hat {x}?"),
    ("P1082", "es", "¿Cuántos habitantes tiene {x}?"),
    ("P1082", "fr", "Combien d'habitants compte {x}?"),
    ("P1082", "it", "Quanti abitanti ha {x}?"),
    ("P1449", "en", "What is the nickname of {x}?"),
    ("P2044", "en", "How high is {x}?"),
    ("P2044", "de", "Wie hoch liegt {x}?"),
    ("P2044", "es", "¿A qué altitud está {x}?"),
    ("P2044", "fr", "À quelle altitude se trouve {x}?"),
    ("P2044", "it", "A che altitudine si trova {x}?"),
]

VOCAB = """
the a of in is was by and from on at to it he she city river country capital
state sovereign novel writer born population has lies major flows through
der die das ist ein eine und in von aus wurde am geboren stadt fluss staat
el la los las de del es un una y en río ciudad país capital nació
le la les de du des est un une et en à ville fleuve pays né née
il la di del della è un una e a città fiume stato nato nata
paris berlin london madrid lima rome roma amazon amazonas brazil peru
"""


def write_jsonl(path, records):
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for r in records:
            f.write(json.dumps(r, ensure_ascii=False, separators=(",", ":")) + "\n")


def main():
    kb, pages = build()
    with open(os.path.join(HERE, "kb.jsonl"), "w", encoding="utf-8", newline="\n") as f:
        for r in kb:
            f.write(json.dumps(r, ensure_ascii=False, separators=(",", ":")) + "\n")
        # noise: a broken line, an unsupported precision, a repeated qid
        f.write('{"qid": "Q1", "labels": \n')
        f.write(json.dumps({"qid": "Q2", "labels": {"en": "Old"},
                            "statements": [{"pid": "P569", "type": "time",
                                            "value": {"time": "1200", "precision": "century"}}]}) + "\n")
        f.write(json.dumps({"qid": "Q90", "labels": {"en": "Lutetia"}, "statements": []}) + "\n")

    os.makedirs(os.path.join(HERE, "corpus"), exist_ok=True)
    pages["en"].append({"qid": "Q999999", "language": "en", "title": "Nowhere", "text": "Nowhere is a place in Brazil."})
    pages["de"].append({"qid": "Q19686", "language": "de", "title": "Themse", "text": "Doppelte Seite ohne Bedeutung."})
    pages["de"].append({"qid": "Q45", "language": "de", "title": "Leer", "text": "   "})
    pages["es"].append({"qid": "Q29", "language": "pt", "title": "Espanha", "text": "Espanha é um país."})
    pages["it"].append({"qid": "Q1189010", "language": "it", "title": "Finzioni", "text": "Finzioni è una raccolta di Jorge Luis Borges."})
    for lang in LANGS:
        path = os.path.join(HERE, "corpus", f"{lang}.jsonl")
        write_jsonl(path, pages[lang])
        if lang == "fr":
            with open(path, "a", encoding="utf-8") as f:
                f.write("not json at all\n")

    with open(os.path.join(HERE, "properties.tsv"), "w", encoding="utf-8", newline="\n") as f:
        f.write("# pid\tlang\tlabel\n")
        for pid, labels in PROPERTIES.items():
            for lang in LANGS:
                f.write(f"{pid}\t{lang}\t{labels[lang]}\n")

    with open(os.path.join(HERE, "templates.tsv"), "w", encoding="utf-8", newline="\n") as f:
        f.write("# template_id\tpid\tlang\tpattern\n")
        seen = {}
        for pid, lang, pattern in TEMPLATES:
            n = seen[(pid, lang)] = seen.get((pid, lang), 0) + 1
            f.write(f"{pid}-{lang}-{n}\t{pid}\t{lang}\t{pattern}\n")

    with open(os.path.join(HERE, "vocab.txt"), "w", encoding="utf-8", newline="\n") as f:
        for token in sorted(set(VOCAB.split())):
            f.write(token + "\n")


if __name__ == "__main__":
    main()
