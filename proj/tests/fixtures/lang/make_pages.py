"""Writes the labeled Czech/Slovak validation pages and labels.json.

Texts are original short articles; rerun after editing them.
"""
import json
import pathlib

HERE = pathlib.Path(__file__).parent

SK = [
    ("Zdravie", "Lekári varujú pred zázračnými elixírmi z internetu",
     "Ministerstvo zdravotníctva upozorňuje, že na sociálnych sieťach sa opäť šíria ponuky zázračných elixírov, "
     "ktoré vraj vyliečia cukrovku aj vysoký tlak. Odborníci pripomínajú, že žiadny z týchto prípravkov neprešiel "
     "klinickým skúšaním. Ľudia by sa mali pred užívaním akéhokoľvek doplnku poradiť so svojím všeobecným lekárom. "
     "Podľa hovorcu rezortu už úrady zablokovali niekoľko podozrivých obchodov, no nové vznikajú takmer každý týždeň."),
    ("Domov", "Obce na východe dostanú peniaze na opravu ciest",
     "Vláda na stredajšom rokovaní schválila balík peňazí pre menšie obce na východnom Slovensku. Starostovia ich "
     "môžu použiť na opravu miestnych ciest, chodníkov a mostov, ktoré sú v mnohých dedinách v žalostnom stave. "
     "Žiadosti budú prijímať do konca septembra. Predseda združenia miest a obcí povedal, že suma je síce nižšia, "
     "ako žiadali, ale aspoň časť najhorších úsekov sa konečne podarí opraviť ešte pred zimou."),
    ("Názory", "Prečo by sme mali čítať viac ako len titulky",
     "Väčšina z nás dnes preletí očami desiatky správ denne, no dočíta len zlomok z nich. Titulok pritom často "
     "nehovorí celú pravdu a niekedy je napísaný tak, aby v čitateľovi vyvolal hnev. Skúsme si preto pred zdieľaním "
     "článku položiť jednoduchú otázku: viem, kto ho napísal a odkiaľ má svoje informácie? Ak odpoveď nepoznáme, "
     "je lepšie počkať, kým sa k téme vyjadria aj iné redakcie."),
    ("Zdravie", "Bylinkový čaj na jeseň: čo naozaj pomáha",
     "S príchodom chladnejších dní siahame častejšie po bylinkových čajoch. Lipový kvet, materina dúška či šalvia "
     "majú v našich končinách dlhú tradíciu a mnohým ľuďom prinášajú úľavu pri nachladnutí. Treba však povedať, že "
     "čaj nenahradí lieky, ktoré predpíše lekár. Ak horúčka trvá dlhšie ako tri dni, alebo sa pridá sťažené dýchanie, "
     "neodkladajte návštevu ambulancie."),
    ("Svet", "Európski ministri sa nedohodli na spoločnom postupe",
     "Stretnutie ministrov zahraničných vecí v Bruseli sa skončilo bez spoločného vyhlásenia. Niektoré štáty "
     "trvali na prísnejších sankciách, iné sa obávali dosahu na vlastné hospodárstvo. Slovenský minister po rokovaní "
     "povedal novinárom, že rozhovory budú pokračovať budúci mesiac. Diplomati zo zákulisia tvrdia, že kompromis je "
     "možný, ak sa podarí nájsť peniaze na podporu najviac postihnutých odvetví."),
    ("Záhady", "Svetlá nad Tatrami opäť rozprúdili debatu",
     "Niekoľko turistov zverejnilo na internete video, na ktorom sú nad hrebeňom Tatier vidieť zvláštne svetlá. "
     "Podľa jedných ide o návštevu z vesmíru, podľa druhých o obyčajné drony alebo satelity. Astronómovia z "
     "observatória na Skalnatom plese vysvetľujú, že v tú noc bolo na oblohe dobre vidieť reťaz satelitov, ktorá "
     "sa pohybuje presne takým spôsobom, aký zachytili kamery."),
    ("Ekonomika", "Ceny potravín v obchodoch ďalej rastú",
     "Štatistický úrad zverejnil nové údaje, podľa ktorých potraviny za posledný rok zdraželi o viac ako desať "
     "percent. Najviac sa zvýšili ceny masla, vajec a čerstvej zeleniny. Obchodníci sa bránia, že za zdražovaním "
     "sú vyššie náklady na energie a dopravu. Ekonómovia odhadujú, že rast cien sa spomalí najskôr na jar, keď by "
     "sa mali ceny energií stabilizovať."),
    ("Šport", "Hokejisti zvládli prípravný zápas vo Zvolene",
     "Slovenská hokejová reprezentácia zdolala v prípravnom stretnutí vo Zvolene súpera z Nórska tesne o gól. "
     "Rozhodujúci zásah strelil mladý útočník v tretej tretine po peknej prihrávke spoza bránky. Tréner bol po "
     "zápase spokojný najmä s hrou v oslabení, no priznal, že mužstvo musí zlepšiť prechod do útoku. Ďalší zápas "
     "odohrajú hráči v sobotu v Nitre."),
    ("Kultúra", "Divadlo v Banskej Bystrici otvára novú sezónu",
     "Štátna opera v Banskej Bystrici otvorí novú sezónu premiérou klasickej slovenskej opery. Riaditeľ divadla "
     "prezradil, že pripravili aj menšie predstavenia pre deti a študentov, ktoré sa budú hrať v dopoludňajších "
     "hodinách. Vstupenky sú už v predaji a záujem je vraj väčší ako po minulé roky. Divadlo zároveň hľadá "
     "dobrovoľníkov, ktorí by pomohli pri organizácii letného festivalu."),
    ("Domov", "Na železnici platí od nedele nový cestovný poriadok",
     "Železničná spoločnosť upozorňuje cestujúcich, že od nedele platí nový cestovný poriadok. Pribudnú spoje "
     "medzi Bratislavou a Košicami a niektoré rýchliky budú zastavovať aj v menších staniciach. Naopak, pre nízky "
     "záujem zrušia niekoľko osobných vlakov na vedľajších tratiach. Pred cestou si preto overte odchody na "
     "stránke dopravcu alebo v mobilnej aplikácii."),
]

CS = [
    ("Zdraví", "Lékaři varují před zázračnými elixíry z internetu",
     "Ministerstvo zdravotnictví upozorňuje, že se na sociálních sítích opět šíří nabídky zázračných elixírů, "
     "které prý vyléčí cukrovku i vysoký tlak. Odborníci připomínají, že žádný z těchto přípravků neprošel "
     "klinickým testováním. Lidé by se měli před užíváním jakéhokoli doplňku poradit se svým praktickým lékařem. "
     "Podle mluvčího resortu už úřady zablokovaly několik podezřelých obchodů, ale nové vznikají téměř každý týden."),
    ("Domov", "Obce na Vysočině dostanou peníze na opravy silnic",
     "Vláda na středečním jednání schválila balík peněz pro menší obce na Vysočině. Starostové je mohou použít na "
     "opravu místních komunikací, chodníků a mostů, které jsou v mnoha vesnicích v žalostném stavu. Žádosti se "
     "budou přijímat do konce září. Předseda svazu měst a obcí řekl, že částka je sice nižší, než žádali, ale "
     "alespoň část nejhorších úseků se konečně podaří opravit ještě před zimou."),
    ("Názory", "Proč bychom měli číst víc než jen titulky",
     "Většina z nás dnes přelétne očima desítky zpráv denně, ale dočte jen zlomek z nich. Titulek přitom často "
     "neříká celou pravdu a někdy je napsaný tak, aby ve čtenáři vyvolal vztek. Zkusme si proto před sdílením "
     "článku položit jednoduchou otázku: vím, kdo ho napsal a odkud má své informace? Pokud odpověď neznáme, je "
     "lepší počkat, až se k tématu vyjádří i jiné redakce."),
    ("Zdraví", "Bylinkový čaj na podzim: co opravdu pomáhá",
     "S příchodem chladnějších dnů sáhneme častěji po bylinkových čajích. Lipový květ, mateřídouška nebo šalvěj "
     "mají u nás dlouhou tradici a mnoha lidem přinášejí úlevu při nachlazení. Je ovšem třeba říct, že čaj "
     "nenahradí léky, které předepíše lékař. Pokud horečka trvá déle než tři dny, nebo se přidá ztížené dýchání, "
     "neodkládejte návštěvu ordinace."),
    ("Svět", "Evropští ministři se nedohodli na společném postupu",
     "Setkání ministrů zahraničních věcí v Bruselu skončilo bez společného prohlášení. Některé státy trvaly na "
     "přísnějších sankcích, jiné se obávaly dopadu na vlastní hospodářství. Český ministr po jednání řekl "
     "novinářům, že rozhovory budou pokračovat příští měsíc. Diplomaté ze zákulisí tvrdí, že kompromis je možný, "
     "pokud se podaří najít peníze na podporu nejvíce postižených odvětví."),
    ("Záhady", "Světla nad Krkonošemi znovu rozpoutala debatu",
     "Několik turistů zveřejnilo na internetu video, na kterém jsou nad hřebenem Krkonoš vidět podivná světla. "
     "Podle jedněch jde o návštěvu z vesmíru, podle druhých o obyčejné drony nebo satelity. Astronomové z "
     "hvězdárny v Hradci Králové vysvětlují, že té noci byl na obloze dobře vidět řetězec satelitů, který se "
     "pohybuje přesně takovým způsobem, jaký zachytily kamery."),
    ("Ekonomika", "Ceny potravin v obchodech dál rostou",
     "Český statistický úřad zveřejnil nové údaje, podle kterých potraviny za poslední rok zdražily o více než "
     "deset procent. Nejvíce se zvýšily ceny másla, vajec a čerstvé zeleniny. Obchodníci se brání, že za "
     "zdražováním stojí vyšší náklady na energie a dopravu. Ekonomové odhadují, že růst cen se zpomalí nejdříve "
     "na jaře, kdy by se měly ceny energií stabilizovat."),
    ("Sport", "Hokejisté zvládli přípravný zápas v Pardubicích",
     "Česká hokejová reprezentace porazila v přípravném utkání v Pardubicích soupeře z Norska těsně o gól. "
     "Rozhodující branku vstřelil mladý útočník ve třetí třetině po pěkné přihrávce zpoza branky. Trenér byl po "
     "zápase spokojený hlavně s hrou v oslabení, ale přiznal, že mužstvo musí zlepšit přechod do útoku. Další "
     "zápas odehrají hráči v sobotu v Brně."),
    ("Kultura", "Divadlo v Ostravě otevírá novou sezónu",
     "Národní divadlo moravskoslezské v Ostravě zahájí novou sezónu premiérou klasické české opery. Ředitel "
     "divadla prozradil, že připravili i menší představení pro děti a studenty, která se budou hrát v dopoledních "
     "hodinách. Vstupenky jsou už v prodeji a zájem je prý větší než v minulých letech. Divadlo zároveň hledá "
     "dobrovolníky, kteří by pomohli s pořádáním letního festivalu."),
    ("Domov", "Na železnici platí od neděle nový jízdní řád",
     "Dopravce upozorňuje cestující, že od neděle platí nový jízdní řád. Přibudou spoje mezi Prahou a Ostravou a "
     "některé rychlíky budou zastavovat i v menších stanicích. Naopak kvůli nízkému zájmu zruší několik osobních "
     "vlaků na vedlejších tratích. Před cestou si proto ověřte odjezdy na stránkách dopravce nebo v mobilní "
     "aplikaci."),
]

TEMPLATE = """<!DOCTYPE html>
<html lang="{lang}">
<head>
<meta charset="utf-8">
<title>{title} | {site}</title>
<script async src="https://www.googletagmanager.com/gtag/js?id=UA-{ua}-1"></script>
<script>window.dataLayer = window.dataLayer || []; function gtag(){{dataLayer.push(arguments);}} gtag('js', new Date()); gtag('config', 'UA-{ua}-1');</script>
<style>body {{ font-family: sans-serif; }} .menu li {{ display: inline; }}</style>
</head>
<body>
<nav><ul class="menu"><li><a href="/">{nav_home}</a></li><li><a href="/rubrika/{slug}">{section}</a></li><li><a href="/kontakt">{nav_contact}</a></li></ul></nav>
<article>
<h1>{title}</h1>
<p class="meta">{section} &middot; 12.&nbsp;3.&nbsp;2021</p>
<p>{body}</p>
</article>
<footer>&copy; 2021 {site}</footer>
</body>
</html>
"""


def main():
    labels = {}
    for lang, texts, site, home, contact in (
        ("sk", SK, "Správy z regiónu", "Úvod", "Kontakt"),
        ("cs", CS, "Zprávy z regionu", "Úvod", "Kontakt"),
    ):
        for i, (section, title, body) in enumerate(texts, 1):
            name = f"{lang}_{i:02d}.html"
            html = TEMPLATE.format(lang=lang, title=title, site=site, ua=4000000 + i, nav_home=home,
                                   nav_contact=contact, section=section, slug=f"r{i}", body=body)
            (HERE / name).write_text(html, encoding="utf-8")
            labels[name] = lang
    (HERE / "labels.json").write_text(json.dumps(labels, indent=1, sort_keys=True) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
